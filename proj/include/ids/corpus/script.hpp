// Copyright 2026 The IDS Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scenario scripts for the customer-service domain: the user-act inventory
// with its paraphrase templates, a template parser, and the rule-based
// system agent whose responses define the corpus.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "ids/corpus/catalog.hpp"
#include "ids/corpus/types.hpp"

namespace ids::corpus {

enum class Intent {
  kGreet,
  kBye,
  kAskAttribute,
  kVerifyAttribute,
  kProvideProduct,
  kAskPaymentMethods,
  kAskInstallment,
  kAskCashOnDelivery,
  kAskExpressCompany,
  kAskDeliveryTime,
  kAskFreeShipping,
  kCompare,
  kProvideTwoProducts,
  kAskInvoice,
  kReportSystemError,
  kAskHowToUpdate,
  kReportNfcError,
  kReportNetworkError,
  kStillNotWorking,
  kReturnGoods,
  kExchangeGoods,
  kQueryLogistics,
  kProvideOrderNumber,
  kProvidePhone,
  kPositiveEmotion,
  kNegativeEmotion,
};

enum class Emotion { kNone, kPositive, kNegative };

struct UserAct {
  Intent intent = Intent::kGreet;
  std::optional<Attribute> attribute;
  std::vector<std::string> entities;
  Emotion emotion = Emotion::kNone;  // emotional clause mixed into a task act

  friend bool operator==(const UserAct&, const UserAct&) = default;
};

/// Acts that open or continue a task and may carry an emotional clause.
inline bool is_emotable(Intent i) {
  switch (i) {
    case Intent::kGreet:
    case Intent::kBye:
    case Intent::kProvideProduct:
    case Intent::kProvideTwoProducts:
    case Intent::kProvideOrderNumber:
    case Intent::kProvidePhone:
    case Intent::kPositiveEmotion:
    case Intent::kNegativeEmotion:
      return false;
    default:
      return true;
  }
}

inline bool is_after_sales(Intent i) {
  switch (i) {
    case Intent::kAskInvoice:
    case Intent::kReportSystemError:
    case Intent::kAskHowToUpdate:
    case Intent::kReportNfcError:
    case Intent::kReportNetworkError:
    case Intent::kStillNotWorking:
    case Intent::kReturnGoods:
    case Intent::kExchangeGoods:
    case Intent::kQueryLogistics:
    case Intent::kProvideOrderNumber:
    case Intent::kProvidePhone:
      return true;
    default:
      return false;
  }
}

// ---------------------------------------------------------------------------
// Paraphrase templates. "{e}" / "{e1}" / "{e2}" mark entity slots.

struct Template {
  Intent intent;
  std::optional<Attribute> attribute;
  std::string text;
};

namespace detail {

inline std::vector<Template> build_templates() {
  using A = Attribute;
  using I = Intent;
  std::vector<Template> t;
  auto add = [&](I intent, std::optional<A> attr, std::initializer_list<const char*> texts) {
    for (const char* s : texts) t.push_back({intent, attr, s});
  };
  add(I::kGreet, {}, {"hello", "hi", "hello , are you there ?", "good morning", "hi , i need some help"});
  add(I::kBye, {}, {"thanks , bye", "thank you , goodbye", "ok , that is all", "bye", "thanks a lot , see you"});

  add(I::kAskAttribute, A::kPrice,
      {"how much is {e} ?", "what is the price of {e} ?", "how much does {e} cost ?", "tell me the price of {e} .",
       "what does {e} sell for ?", "i want to know the price of {e} ."});
  add(I::kAskAttribute, A::kDiscount,
      {"is {e} on sale ?", "is {e} still on sales ?", "is there any discount for {e} ?",
       "can i get a discount on {e} ?", "does {e} have a discount now ?"});
  add(I::kAskAttribute, A::kOs,
      {"what operating system does {e} use ?", "which system is {e} running ?",
       "tell me about the operating system of {e} .", "what os is on {e} ?", "what is the system of {e} ?"});
  add(I::kAskAttribute, A::kColor,
      {"what colors does {e} come in ?", "which colors are available for {e} ?", "what color is {e} ?",
       "tell me the colors of {e} .", "how many colors does {e} have ?"});
  add(I::kAskAttribute, A::kWeight,
      {"how heavy is {e} ?", "what is the weight of {e} ?", "how much does {e} weigh ?",
       "tell me the weight of {e} .", "i want to know how heavy {e} is ."});
  add(I::kAskAttribute, A::kScreen,
      {"how big is the screen of {e} ?", "what is the screen size of {e} ?", "tell me the screen size of {e} .",
       "how large is the display of {e} ?", "what size is the screen on {e} ?"});
  add(I::kAskAttribute, A::kBattery,
      {"how big is the battery of {e} ?", "what is the battery capacity of {e} ?",
       "tell me about the battery of {e} .", "how long does the battery of {e} last ?",
       "what battery does {e} have ?"});
  add(I::kAskAttribute, A::kNfc,
      {"what about nfc on {e} ?", "tell me about the nfc of {e} .", "how is the nfc support of {e} ?",
       "what is the nfc status of {e} ?", "i want to know the nfc function of {e} ."});

  add(I::kVerifyAttribute, A::kOs,
      {"does {e} support android ?", "is {e} an android phone ?", "can {e} run android apps ?",
       "does {e} use android ?", "is the system of {e} android ?"});
  add(I::kVerifyAttribute, A::kColor,
      {"is {e} available in red ?", "do you have {e} in black ?", "can i buy {e} in white ?",
       "is there a blue version of {e} ?", "does {e} come in gold ?"});
  add(I::kVerifyAttribute, A::kNfc,
      {"does {e} support nfc ?", "does {e} have nfc ?", "can i use nfc on {e} ?", "is nfc available on {e} ?",
       "does {e} come with nfc ?"});
  add(I::kVerifyAttribute, A::kBattery,
      {"does {e} have a big battery ?", "is the battery of {e} over 4000 mah ?",
       "can the battery of {e} last a whole day ?", "is the battery of {e} large enough ?",
       "does {e} have a long battery life ?"});
  add(I::kVerifyAttribute, A::kWeight,
      {"is {e} light ?", "is {e} lighter than 200 g ?", "is {e} too heavy ?", "is {e} easy to carry ?",
       "does {e} weigh less than 180 g ?"});

  add(I::kProvideProduct, {},
      {"i mean {e} .", "{e} .", "it is {e} .", "i am asking about {e} .", "the one i want is {e} ."});

  add(I::kAskPaymentMethods, {},
      {"what payment methods do you support ?", "how can i pay ?", "which payment methods are available ?",
       "what are the ways to pay ?", "can you tell me how to pay for it ?"});
  add(I::kAskInstallment, {},
      {"can i pay by installments ?", "do you support installment payment ?", "is installment available ?",
       "can i split the payment ?", "do you offer monthly payments ?"});
  add(I::kAskCashOnDelivery, {},
      {"can i pay on delivery ?", "do you support cash on delivery ?", "is cash on delivery available ?",
       "can i pay when the package arrives ?", "may i pay the courier in cash ?"});
  add(I::kAskExpressCompany, {},
      {"which express company do you use ?", "what courier do you ship with ?",
       "which delivery company will send it ?", "who delivers the package ?", "what express do you use ?"});
  add(I::kAskDeliveryTime, {},
      {"how long does delivery take ?", "when will it arrive ?", "how many days until it arrives ?",
       "how fast is the delivery ?", "how soon can i get it ?"});
  add(I::kAskFreeShipping, {},
      {"is shipping free ?", "do i have to pay for shipping ?", "is there a delivery fee ?",
       "how much is the shipping fee ?", "do you offer free delivery ?"});

  add(I::kCompare, A::kPrice,
      {"is {e1} cheaper than {e2} ?", "which is cheaper , {e1} or {e2} ?", "compare the price of {e1} and {e2} .",
       "is {e1} more expensive than {e2} ?", "which costs less , {e1} or {e2} ?", "which one is cheaper ?",
       "compare their prices .", "which one costs less ?"});
  add(I::kCompare, A::kWeight,
      {"is {e1} lighter than {e2} ?", "which is lighter , {e1} or {e2} ?", "compare the weight of {e1} and {e2} .",
       "is {e1} heavier than {e2} ?", "which weighs less , {e1} or {e2} ?", "which one is lighter ?",
       "compare their weight .", "which one weighs less ?"});
  add(I::kCompare, A::kScreen,
      {"is the screen of {e1} bigger than {e2} ?", "which has a bigger screen , {e1} or {e2} ?",
       "compare the screen size of {e1} and {e2} .", "is the screen of {e1} smaller than {e2} ?",
       "which screen is larger , {e1} or {e2} ?", "which one has a bigger screen ?", "compare their screens .",
       "which screen is larger ?"});
  add(I::kCompare, A::kBattery,
      {"does {e1} have a bigger battery than {e2} ?", "which has a bigger battery , {e1} or {e2} ?",
       "compare the battery of {e1} and {e2} .", "is the battery of {e1} smaller than {e2} ?",
       "which battery lasts longer , {e1} or {e2} ?", "which one has a bigger battery ?",
       "compare their batteries .", "which battery lasts longer ?"});
  add(I::kProvideTwoProducts, {},
      {"{e1} and {e2} .", "i mean {e1} and {e2} .", "compare {e1} with {e2} .", "{e1} versus {e2} .",
       "between {e1} and {e2} ."});

  add(I::kAskInvoice, {},
      {"i need an invoice .", "can you give me an invoice ?", "please issue an invoice for me .",
       "how do i get an invoice ?", "i want to ask for an invoice ."});
  add(I::kReportSystemError, {},
      {"the operating system breaks down , what should i do ?", "my system keeps crashing .",
       "the system does not work properly .", "the phone system is broken .", "my operating system has a problem ."});
  add(I::kAskHowToUpdate, {},
      {"i do not know how to update the system .", "how do i update the system ?", "how can i update it ?",
       "tell me how to update the system .", "what are the steps to update ?"});
  add(I::kReportNfcError, {},
      {"nfc does not work .", "my nfc is broken .", "i cannot use nfc .", "the nfc function fails .",
       "nfc stopped working ."});
  add(I::kReportNetworkError, {},
      {"i cannot connect to the network .", "the network does not work .", "my phone has no signal .",
       "the internet connection keeps dropping .", "i cannot get online ."});
  add(I::kStillNotWorking, {},
      {"it still does not work .", "still broken .", "that did not help .", "the problem is still there .",
       "it is still not working ."});
  add(I::kReturnGoods, {},
      {"i want to send the product back .", "i want to return the goods .", "how can i return it ?",
       "i would like a refund for this product .", "please help me return the item ."});
  add(I::kExchangeGoods, {},
      {"i want to exchange the product .", "can i exchange it for a new one ?", "i would like to swap this item .",
       "please help me exchange the goods .", "how do i exchange the product ?"});
  add(I::kQueryLogistics, {},
      {"where is my package ?", "can you check my delivery status ?", "has my order been shipped ?",
       "i want to track my package .", "when will my order be delivered ?"});
  add(I::kProvideOrderNumber, {},
      {"my order number is $orderNumber$ .", "$orderNumber$ .", "the order number is $orderNumber$ .",
       "here it is : $orderNumber$ .", "it is $orderNumber$ ."});
  add(I::kProvidePhone, {},
      {"my phone number is $phone$ .", "$phone$ .", "you can call me at $phone$ .", "the number is $phone$ .",
       "here is my phone number : $phone$ ."});
  add(I::kPositiveEmotion, {},
      {"oh , it is cheap and high quality . i like it !", "great , i am very satisfied !",
       "your service is excellent !", "wow , that is wonderful !", "i really love this product !"});
  add(I::kNegativeEmotion, {},
      {"the system always has problems . i am very disappointed .", "this is so annoying !",
       "i am really upset about this .", "what a terrible experience !", "i am very unhappy with this ."});
  return t;
}

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

}  // namespace detail

inline const std::vector<Template>& templates() {
  static const std::vector<Template> t = detail::build_templates();
  return t;
}

inline const std::vector<std::string>& emotion_clauses(Emotion e) {
  static const std::vector<std::string> positive = {"it looks great ,", "oh , it is cheap and high quality ,",
                                                    "i really like your products ,", "wow , nice ,",
                                                    "that sounds good ,"};
  static const std::vector<std::string> negative = {"i cannot stand it anymore ,", "it looks so troublesome ,",
                                                    "this is really disappointing ,", "i am so annoyed ,",
                                                    "what a mess ,"};
  IDS_REQUIRE(e != Emotion::kNone, "no clauses for neutral emotion");
  return e == Emotion::kPositive ? positive : negative;
}

inline int entity_slots(const std::string& text) {
  if (text.find("{e2}") != std::string::npos) return 2;
  if (text.find("{e}") != std::string::npos) return 1;
  return 0;
}

/// Fills a template. For single-entity intents an empty entity list
/// realizes the ellipsis form ("it").
inline std::string realize(const Template& t, const std::vector<std::string>& entities) {
  const int slots = entity_slots(t.text);
  if (slots == 2) {
    IDS_REQUIRE(entities.size() == 2, "template '", t.text, "' needs two entities");
    return detail::replace_all(detail::replace_all(t.text, "{e1}", entities[0]), "{e2}", entities[1]);
  }
  if (slots == 1) {
    if (entities.empty()) return detail::replace_all(t.text, "{e}", "it");
    return detail::replace_all(t.text, "{e}", entities[0]);
  }
  IDS_REQUIRE(entities.empty(), "template '", t.text, "' takes no entities");
  return t.text;
}

/// Templates usable for an act (intent, attribute, number of entities).
inline std::vector<const Template*> templates_for(const UserAct& act) {
  std::vector<const Template*> out;
  for (const auto& t : templates()) {
    if (t.intent != act.intent || t.attribute != act.attribute) continue;
    const int slots = entity_slots(t.text);
    const bool ok = act.intent == Intent::kCompare
                        ? (slots == 2) == (act.entities.size() == 2)
                        : (slots == static_cast<int>(act.entities.size()) ||
                           (slots == 1 && act.entities.empty() && act.intent != Intent::kProvideProduct));
    if (ok) out.push_back(&t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser: maps an utterance back to the act it realizes. Entity tokens
// (raw or entity-order) are abstracted to a marker before lookup.

class ActParser {
 public:
  ActParser() {
    for (const auto& t : templates()) {
      const int slots = entity_slots(t.text);
      std::string skeleton = detail::replace_all(
          detail::replace_all(detail::replace_all(t.text, "{e1}", kMarker), "{e2}", kMarker), "{e}", kMarker);
      insert(skeleton, {t.intent, t.attribute, slots});
      if (slots == 1 && t.intent != Intent::kProvideProduct)
        insert(detail::replace_all(t.text, "{e}", "it"), {t.intent, t.attribute, 0});
    }
  }

  std::optional<UserAct> parse(const std::string& utterance) const {
    auto tokens = tokenize(utterance);
    if (auto act = lookup(tokens)) return act;
    for (Emotion e : {Emotion::kPositive, Emotion::kNegative}) {
      for (const auto& clause : emotion_clauses(e)) {
        auto ctoks = tokenize(clause);
        if (tokens.size() <= ctoks.size() || !std::equal(ctoks.begin(), ctoks.end(), tokens.begin())) continue;
        std::vector<std::string> rest(tokens.begin() + static_cast<std::ptrdiff_t>(ctoks.size()), tokens.end());
        if (auto act = lookup(rest); act && is_emotable(act->intent)) {
          act->emotion = e;
          return act;
        }
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr const char* kMarker = "<ENT>";

  struct Entry {
    Intent intent;
    std::optional<Attribute> attribute;
    int slots;
    bool operator==(const Entry&) const = default;
  };

  void insert(const std::string& skeleton, Entry e) {
    auto [it, inserted] = table_.emplace(join(tokenize(skeleton)), e);
    IDS_REQUIRE(inserted || it->second == e, "ambiguous template skeleton '", skeleton, "'");
  }

  std::optional<UserAct> lookup(const std::vector<std::string>& tokens) const {
    std::vector<std::string> skel;
    std::vector<std::string> ents;
    for (const auto& tok : tokens) {
      if (is_entity_token(tok)) {
        skel.emplace_back(kMarker);
        ents.push_back(tok);
      } else {
        skel.push_back(tok);
      }
    }
    auto it = table_.find(join(skel));
    if (it == table_.end() || static_cast<int>(ents.size()) != it->second.slots) return std::nullopt;
    return UserAct{it->second.intent, it->second.attribute, ents, Emotion::kNone};
  }

  std::unordered_map<std::string, Entry> table_;
};

// ---------------------------------------------------------------------------
// System responses.

namespace responses {

inline constexpr const char* kGreet = "hello , what can i do for you ?";
inline constexpr const char* kBye = "you are welcome , goodbye .";
inline constexpr const char* kAskProduct = "which product are you asking about ?";
inline constexpr const char* kAskCompare = "which two products do you want to compare ?";
inline constexpr const char* kPaymentMethods = "we support $payment_methods$ .";
inline constexpr const char* kInstallment = "installment payment is available for orders over $installment_threshold$ .";
inline constexpr const char* kCashOnDelivery = "sorry , cash on delivery is not supported at the moment .";
inline constexpr const char* kExpressCompany = "we ship all orders with $express_company$ .";
inline constexpr const char* kDeliveryTime = "the delivery usually takes $delivery_days$ days .";
inline constexpr const char* kFreeShipping = "shipping is free for orders over $free_shipping_threshold$ .";
inline constexpr const char* kAskOrderNumber = "please tell me your order number .";
inline constexpr const char* kInvoiceIssued = "the invoice has been issued : $api_call issue invoice$ .";
inline constexpr const char* kReturnAddress = "please send the item to this address : $address$ .";
inline constexpr const char* kAskPhone = "please tell me your phone number .";
inline constexpr const char* kExchangeArranged = "we will contact you soon to arrange the exchange .";
inline constexpr const char* kLogistics = "here is the logistics information : $api_call query logistics$ .";
inline constexpr const char* kTryUpdate = "you can try to update the system .";
inline constexpr const char* kUpdateApi = "please refer to this : $api_call update system$ .";
inline constexpr const char* kNfcCheck = "please make sure nfc is turned on in the settings .";
inline constexpr const char* kNfcApi = "please refer to this : $api_call fix nfc$ .";
inline constexpr const char* kNetworkRestart = "please try to restart the network settings .";
inline constexpr const char* kNetworkApi = "please refer to this : $api_call fix network$ .";
inline constexpr const char* kThanksApproval = "thank you for your approval .";
inline constexpr const char* kFallback = "sorry , i do not understand .";
inline constexpr const char* kPositivePrefix = "thank you for your approval , ";
inline constexpr const char* kNegativePrefix = "i am so sorry to give you trouble , ";

inline std::string attribute_answer(Attribute a) {
  switch (a) {
    case Attribute::kPrice: return "the price of it is $price$ .";
    case Attribute::kDiscount: return "the current discount is $discount$ .";
    case Attribute::kOs: return "the operating system of it is $os$ .";
    case Attribute::kColor: return "it is available in $color$ .";
    case Attribute::kWeight: return "it weighs $weight$ .";
    case Attribute::kScreen: return "the screen size of it is $screen$ .";
    case Attribute::kBattery: return "the battery capacity of it is $battery$ .";
    case Attribute::kNfc: return "as for nfc , it is $nfc$ .";
  }
  return kFallback;
}

inline std::string compare_answer(Attribute a, const std::string& first, const std::string& second) {
  const std::string name = attribute_name(a);
  const std::string what = a == Attribute::kScreen ? "screen size" : a == Attribute::kBattery ? "battery" : name;
  return "compared with " + second + " , the " + what + " of " + first + " is $" + name + "_comparison$ .";
}

enum class Topic { kNone, kSystem, kNfc, kNetwork };

inline std::string apology(Topic topic) {
  const char* what = topic == Topic::kSystem    ? "the operating system"
                     : topic == Topic::kNfc     ? "the nfc function"
                     : topic == Topic::kNetwork ? "the network service"
                                                : "our service";
  return std::string("i am so sorry to give you trouble , we will do our best to improve ") + what + " .";
}

inline std::string with_emotion(Emotion e, const std::string& response) {
  if (e == Emotion::kPositive) return kPositivePrefix + response;
  if (e == Emotion::kNegative) return kNegativePrefix + response;
  return response;
}

}  // namespace responses

/// Rule-based customer-service agent. Its response is a deterministic
/// function of the act sequence seen so far.
class SystemAgent {
 public:
  using Topic = responses::Topic;

  std::string respond(const UserAct& act) {
    namespace r = responses;
    for (const auto& e : act.entities)
      if (std::find(mentioned_.begin(), mentioned_.end(), e) == mentioned_.end()) mentioned_.push_back(e);
    if (opens_task(act.intent)) topic_ = Topic::kNone;
    std::string out;
    switch (act.intent) {
      case Intent::kGreet: out = r::kGreet; break;
      case Intent::kBye: out = r::kBye; break;
      case Intent::kAskAttribute:
      case Intent::kVerifyAttribute:
        if (!act.entities.empty()) focus_ = act.entities[0];
        if (focus_) {
          out = r::attribute_answer(*act.attribute);
        } else {
          pending_ = Pending::kProduct;
          pending_attribute_ = *act.attribute;
          out = r::kAskProduct;
        }
        break;
      case Intent::kProvideProduct:
        if (pending_ == Pending::kProduct && !act.entities.empty()) {
          focus_ = act.entities[0];
          pending_ = Pending::kNone;
          out = r::attribute_answer(pending_attribute_);
        } else {
          out = r::kFallback;
        }
        break;
      case Intent::kAskPaymentMethods: out = r::kPaymentMethods; break;
      case Intent::kAskInstallment: out = r::kInstallment; break;
      case Intent::kAskCashOnDelivery: out = r::kCashOnDelivery; break;
      case Intent::kAskExpressCompany: out = r::kExpressCompany; break;
      case Intent::kAskDeliveryTime: out = r::kDeliveryTime; break;
      case Intent::kAskFreeShipping: out = r::kFreeShipping; break;
      case Intent::kCompare:
        if (act.entities.size() == 2) {
          out = compare(*act.attribute, act.entities[0], act.entities[1]);
          focus_.reset();
        } else {
          pending_ = Pending::kCompare;
          pending_attribute_ = *act.attribute;
          out = r::kAskCompare;
        }
        break;
      case Intent::kProvideTwoProducts:
        if (pending_ == Pending::kCompare && act.entities.size() == 2) {
          pending_ = Pending::kNone;
          focus_.reset();
          out = compare(pending_attribute_, act.entities[0], act.entities[1]);
        } else {
          out = r::kFallback;
        }
        break;
      case Intent::kAskInvoice:
      case Intent::kReturnGoods:
      case Intent::kExchangeGoods:
      case Intent::kQueryLogistics:
        pending_ = Pending::kOrderNumber;
        order_for_ = act.intent;
        out = r::kAskOrderNumber;
        break;
      case Intent::kProvideOrderNumber:
        if (pending_ != Pending::kOrderNumber) {
          out = r::kFallback;
          break;
        }
        pending_ = Pending::kNone;
        switch (order_for_) {
          case Intent::kAskInvoice: out = r::kInvoiceIssued; break;
          case Intent::kReturnGoods: out = r::kReturnAddress; break;
          case Intent::kExchangeGoods:
            pending_ = Pending::kPhone;
            out = r::kAskPhone;
            break;
          default: out = r::kLogistics; break;
        }
        break;
      case Intent::kProvidePhone:
        if (pending_ == Pending::kPhone) {
          pending_ = Pending::kNone;
          out = r::kExchangeArranged;
        } else {
          out = r::kFallback;
        }
        break;
      case Intent::kReportSystemError:
        topic_ = Topic::kSystem;
        out = r::kTryUpdate;
        break;
      case Intent::kAskHowToUpdate: out = r::kUpdateApi; break;
      case Intent::kReportNfcError:
        topic_ = Topic::kNfc;
        out = r::kNfcCheck;
        break;
      case Intent::kReportNetworkError:
        topic_ = Topic::kNetwork;
        out = r::kNetworkRestart;
        break;
      case Intent::kStillNotWorking:
        out = topic_ == Topic::kNfc       ? r::kNfcApi
              : topic_ == Topic::kNetwork ? r::kNetworkApi
              : topic_ == Topic::kSystem  ? r::kUpdateApi
                                          : r::kFallback;
        break;
      case Intent::kPositiveEmotion: out = r::kThanksApproval; break;
      case Intent::kNegativeEmotion: out = r::apology(topic_); break;
    }
    return r::with_emotion(act.emotion, out);
  }

  const std::optional<std::string>& focus() const { return focus_; }
  Topic topic() const { return topic_; }
  bool awaiting_product() const { return pending_ == Pending::kProduct; }
  bool awaiting_products() const { return pending_ == Pending::kCompare; }
  bool awaiting_order_number() const { return pending_ == Pending::kOrderNumber; }
  bool awaiting_phone() const { return pending_ == Pending::kPhone; }

 private:
  enum class Pending { kNone, kProduct, kCompare, kOrderNumber, kPhone };

  // Comparisons are phrased with the earlier-mentioned product second.
  std::string compare(Attribute a, const std::string& x, const std::string& y) const {
    auto rank = [&](const std::string& e) { return std::find(mentioned_.begin(), mentioned_.end(), e) - mentioned_.begin(); };
    return rank(x) < rank(y) ? responses::compare_answer(a, y, x) : responses::compare_answer(a, x, y);
  }

  static bool opens_task(Intent i) {
    return is_emotable(i) && i != Intent::kAskHowToUpdate && i != Intent::kStillNotWorking;
  }

  std::optional<std::string> focus_;
  Pending pending_ = Pending::kNone;
  Attribute pending_attribute_ = Attribute::kPrice;
  Intent order_for_ = Intent::kAskInvoice;
  Topic topic_ = Topic::kNone;
  std::vector<std::string> mentioned_;
};

/// Every normalized response the scripts can emit in a tier. Comparisons
/// reference at most three distinct entities per episode, later-mentioned
/// product first.
inline std::vector<std::string> canonical_inventory(int tier) {
  require_tier(tier);
  namespace r = responses;
  std::vector<std::string> pre_sales = {r::kAskProduct};
  for (auto a : kAllAttributes) pre_sales.push_back(r::attribute_answer(a));
  for (const char* s : {r::kPaymentMethods, r::kInstallment, r::kCashOnDelivery, r::kExpressCompany,
                        r::kDeliveryTime, r::kFreeShipping})
    pre_sales.emplace_back(s);
  if (tier >= 3) {
    pre_sales.emplace_back(r::kAskCompare);
    for (auto a : kComparableAttributes)
      for (int i = 1; i <= 3; ++i)
        for (int j = 1; j < i; ++j)
            pre_sales.push_back(r::compare_answer(a, "$entity_order_" + std::to_string(i) + "$",
                                                  "$entity_order_" + std::to_string(j) + "$"));
  }
  std::vector<std::string> after_sales_emotable;
  std::vector<std::string> after_sales_other;
  if (tier >= 4) {
    after_sales_emotable = {r::kAskOrderNumber, r::kTryUpdate,       r::kUpdateApi, r::kNfcCheck,
                            r::kNfcApi,         r::kNetworkRestart, r::kNetworkApi};
    after_sales_other = {r::kInvoiceIssued, r::kReturnAddress, r::kAskPhone, r::kExchangeArranged, r::kLogistics};
  }
  std::vector<std::string> out = {r::kGreet, r::kBye};
  out.insert(out.end(), pre_sales.begin(), pre_sales.end());
  out.insert(out.end(), after_sales_emotable.begin(), after_sales_emotable.end());
  out.insert(out.end(), after_sales_other.begin(), after_sales_other.end());
  if (tier >= 5) {
    out.emplace_back(r::kThanksApproval);
    for (auto t : {r::Topic::kSystem, r::Topic::kNfc, r::Topic::kNetwork})
      out.push_back(r::apology(t));
    for (const auto& s : pre_sales) out.push_back(r::with_emotion(Emotion::kPositive, s));
    for (const auto& s : after_sales_emotable) out.push_back(r::with_emotion(Emotion::kNegative, s));
  }
  return out;
}

}  // namespace ids::corpus
