#include "laud/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <vector>

#include "laud/errors.hpp"
#include "laud/rng.hpp"

namespace laud {

namespace {

using Words = std::vector<std::string_view>;

struct Family {
  std::string_view name;
  Words en;
  Words zh;
};

// Core nouns per family. A category family's nouns are also its fragments.
const Family kCoffee{"coffee",
                     {"coffee", "espresso", "latte", "americano", "cappuccino", "mocha", "cold brew coffee",
                      "drip coffee", "coffee beans", "arabica beans", "instant coffee", "flat white", "macchiato",
                      "dark roast beans", "french roast", "whole bean blend", "ground coffee"},
                     {"咖啡", "拿鐵", "美式咖啡", "濃縮咖啡", "咖啡豆", "掛耳咖啡", "卡布奇諾", "摩卡", "冷萃咖啡",
                      "深焙咖啡豆", "烘焙豆"}};
const Family kTea{"tea",
                  {"green tea", "oolong", "matcha", "black tea", "jasmine tea", "earl grey", "pu-erh", "chai",
                   "milk tea", "tea bags", "sencha", "herbal tea", "loose leaf tea", "jasmine pearls tea", "rooibos"},
                  {"綠茶", "烏龍茶", "抹茶", "紅茶", "茉莉花茶", "普洱", "奶茶", "茶包", "鐵觀音", "花草茶"}};
const Family kSnacks{"snacks",
                     {"cookies", "potato chips", "crackers", "wafers", "chocolate bar", "granola bar", "pretzels",
                      "rice crackers", "gummies", "roasted almonds", "roasted peanuts", "dark chocolate", "jelly beans",
                      "black beans", "jasmine rice", "herbal drops"},
                     {"餅乾", "洋芋片", "蘇打餅", "巧克力", "米果", "軟糖", "蛋捲", "烘焙杏仁", "黑巧克力", "烘焙堅果",
                      "茉莉香米"}};
const Family kDairy{"dairy",
                    {"whole milk", "yogurt", "cheddar cheese", "butter", "cream cheese", "oat milk", "kefir"},
                    {"牛奶", "優格", "起司", "奶油", "鮮乳", "豆漿"}};
const Family kJuice{"juice",
                    {"orange juice", "apple juice", "sparkling water", "cola", "lemonade", "energy drink",
                     "coconut water"},
                    {"柳橙汁", "蘋果汁", "氣泡水", "可樂", "檸檬汁", "運動飲料"}};
const Family kHousehold{"household",
                        {"dish soap", "paper towels", "laundry detergent", "trash bags", "sponges", "hand soap",
                         "toothpaste", "herbal shampoo", "jasmine hand soap", "dark laundry detergent"},
                        {"洗碗精", "衛生紙", "洗衣精", "垃圾袋", "菜瓜布", "洗手乳", "牙膏"}};

// Heads that turn a category fragment into something else.
const Words kAmbiguousHeadsEn{"cookies", "candy", "ice cream", "cake", "mug", "table", "scented candle",
                              "body scrub", "socks", "grinder", "lip balm", "coasters", "filter papers",
                              "creamer", "capsule rack", "thermos", "tumbler", "hand cream", "shampoo",
                              "face mask", "chocolate", "protein bar", "frosting", "syrup", "machine",
                              "kettle", "cup lids", "paint", "sofa", "soap", "cereal", "yogurt",
                              "air freshener", "t-shirt", "poster", "storage tin"};
const Words kAmbiguousHeadsZh{"餅乾", "糖果", "冰淇淋", "蛋糕", "馬克杯", "杯墊", "香氛蠟燭", "磨豆機", "護唇膏",
                              "濾紙", "奶精", "保溫杯", "咖啡機", "手沖壺", "沐浴乳", "面膜", "巧克力",
                              "糖漿", "沙發", "油漆", "香皂", "優格", "抱枕", "收納罐"};
const Words kCoffeeModifiersEn{"coffee", "mocha", "espresso", "latte", "coffee-flavored", "cappuccino"};
const Words kCoffeeModifiersZh{"咖啡", "摩卡", "拿鐵", "咖啡風味"};
const Words kTeaModifiersEn{"green tea", "matcha", "earl grey", "milk tea", "chai", "oolong"};
const Words kTeaModifiersZh{"抹茶", "綠茶", "奶茶", "紅茶", "烏龍"};

const Words kDescriptorsEn{"premium", "organic", "classic", "rich", "smooth", "roasted", "sweet", "low sugar",
                           "unsweetened", "family size", "limited edition", "original", "light", "double",
                           "imported", "fresh"};
const Words kDescriptorsZh{"精選", "經典", "特濃", "香醇", "無糖", "低糖", "有機", "家庭號", "限定", "原味", "進口"};
const Words kSizes{"250ml", "330ml", "500ml", "1L", "2L", "100g", "200g", "500g", "1kg", "12oz", "16oz", "x6",
                   "x12", "x24", "10入", "20入", "30入"};
const Words kPackagingEn{"bottle", "can", "box", "bag", "pack", "jar", "pouch", "carton"};
const Words kPackagingZh{"瓶", "罐", "盒", "袋", "包", "組"};

const Words kSyllables{"ka", "lo", "mi", "ven", "tor", "sa", "ri", "bel", "no", "quin", "da", "zu",
                       "mar", "el", "fi", "go", "ran", "pe", "tu", "vik"};

const Family& category_family(const std::string& category) {
  if (category == "coffee") return kCoffee;
  if (category == "tea") return kTea;
  throw InvalidArgument("no synthetic keyword family for category '" + category + "' (coffee, tea)");
}

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

std::string_view pick(const Words& words, Rng& rng) { return words[rng.below(words.size())]; }

class Namer {
 public:
  Namer(const std::string& category, Rng& rng) : category_(category), rng_(rng) {
    // One brand list shared by every class.
    while (brands_.size() < 60) {
      std::string b;
      const auto parts = 2 + rng_.below(2);
      for (std::uint64_t i = 0; i < parts; ++i) b += pick(kSyllables, rng_);
      b[0] = static_cast<char>(b[0] - 'a' + 'A');
      if (has_category_fragment(category_, b)) continue;
      if (std::find(brands_.begin(), brands_.end(), b) == brands_.end()) brands_.push_back(b);
    }
  }

  // brand [descriptor]{0,2} noun [size] [packaging]
  std::string compose(std::string_view noun, bool zh) {
    std::string out = brands_[rng_.below(brands_.size())];
    const auto& descriptors = zh ? kDescriptorsZh : kDescriptorsEn;
    const auto n_desc = rng_.below(3);
    std::string_view last;
    for (std::uint64_t i = 0; i < n_desc; ++i) {
      const auto d = pick(descriptors, rng_);
      if (d == last) continue;
      out += ' ';
      out += d;
      last = d;
    }
    out += ' ';
    out += noun;
    if (rng_.bernoulli(0.7)) {
      out += ' ';
      out += pick(kSizes, rng_);
    }
    if (rng_.bernoulli(0.6)) {
      out += ' ';
      out += pick(zh ? kPackagingZh : kPackagingEn, rng_);
    }
    return out;
  }

 private:
  const std::string& category_;
  Rng& rng_;
  std::vector<std::string> brands_;
};

}  // namespace

void SynthOptions::validate() const {
  if (size < 1) throw InvalidArgument("size must be at least 1");
  if (!(positive_fraction >= 0.0 && positive_fraction <= 1.0))
    throw InvalidArgument("positive fraction must be in [0, 1]");
  if (!(ambiguous_fraction >= 0.0 && ambiguous_fraction <= 1.0))
    throw InvalidArgument("ambiguous fraction must be in [0, 1]");
  if (positive_fraction + ambiguous_fraction > 1.0)
    throw InvalidArgument("positive and ambiguous fractions exceed 1");
  category_family(category);
}

SynthCounts synth_counts(const SynthOptions& o) {
  o.validate();
  SynthCounts c;
  c.positives = static_cast<std::size_t>(std::llround(static_cast<double>(o.size) * o.positive_fraction));
  c.ambiguous = static_cast<std::size_t>(std::llround(static_cast<double>(o.size) * o.ambiguous_fraction));
  if (c.positives + c.ambiguous > o.size) c.ambiguous = o.size - c.positives;
  c.negatives = o.size - c.positives;
  return c;
}

bool has_category_fragment(const std::string& category, std::string_view text) {
  const auto& family = category_family(category);
  const auto lowered = lower_ascii(text);
  const auto& mods_en = category == "coffee" ? kCoffeeModifiersEn : kTeaModifiersEn;
  const auto& mods_zh = category == "coffee" ? kCoffeeModifiersZh : kTeaModifiersZh;
  for (const auto* words : {&family.en, &family.zh, &mods_en, &mods_zh})
    for (auto w : *words)
      if (lowered.find(lower_ascii(w)) != std::string::npos) return true;
  return false;
}

Pool synthesize_pool(const SynthOptions& o) {
  const auto counts = synth_counts(o);
  const auto& family = category_family(o.category);
  const bool coffee = o.category == "coffee";
  const std::array<const Family*, 5> distractors{coffee ? &kTea : &kCoffee, &kSnacks, &kDairy, &kJuice,
                                                 &kHousehold};
  const std::array<double, 5> distractor_weights{0.25, 0.25, 0.15, 0.15, 0.20};

  auto rng = substream(o.seed, Stream::synth);
  Namer namer(o.category, rng);

  struct Item {
    std::string text;
    bool label;
  };
  std::vector<Item> items;
  items.reserve(o.size);
  for (std::size_t i = 0; i < counts.positives; ++i) {
    const bool zh = rng.bernoulli(0.35);
    items.push_back({namer.compose(pick(zh ? family.zh : family.en, rng), zh), true});
  }
  const auto& mods_en = coffee ? kCoffeeModifiersEn : kTeaModifiersEn;
  const auto& mods_zh = coffee ? kCoffeeModifiersZh : kTeaModifiersZh;
  for (std::size_t i = 0; i < counts.ambiguous; ++i) {
    const bool zh = rng.bernoulli(0.35);
    std::string noun(pick(zh ? mods_zh : mods_en, rng));
    noun += ' ';
    noun += pick(zh ? kAmbiguousHeadsZh : kAmbiguousHeadsEn, rng);
    items.push_back({namer.compose(noun, zh), false});
  }
  for (std::size_t i = counts.positives + counts.ambiguous; i < o.size; ++i) {
    const bool zh = rng.bernoulli(0.35);
    auto u = rng.uniform();
    std::size_t f = 0;
    while (f + 1 < distractors.size() && u >= distractor_weights[f]) u -= distractor_weights[f++];
    const auto* fam = distractors[f];
    items.push_back({namer.compose(pick(zh ? fam->zh : fam->en, rng), zh), false});
  }
  rng.shuffle(std::span<Item>(items));

  std::vector<DataPoint> points;
  points.reserve(items.size());
  char id[32];
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::snprintf(id, sizeof id, "item-%06zu", i + 1);
    points.emplace_back(id, std::move(items[i].text), items[i].label);
  }
  return Pool(std::move(points));
}

ZeroShotLexicon synthetic_lexicon(const std::string& category, double temperature) {
  ZeroShotLexicon lex;
  lex.temperature = temperature;
  if (category == "coffee") {
    lex.positive_terms = {{"coffee", 2.0}, {"咖啡", 2.0}, {"latte", 1.5}, {"espresso", 1.5},
                          {"roast", 0.75}, {"bean", 0.5}, {"dark", 0.5}, {"烘焙", 0.75}};
    lex.negative_terms = {{"tea", 1.5}, {"茶", 1.5}, {"cookie", 1.0}, {"juice", 1.0}, {"soap", 1.5},
                          {"餅乾", 1.0}, {"milk", 0.5}};
  } else if (category == "tea") {
    lex.positive_terms = {{"tea", 2.0}, {"茶", 2.0}, {"matcha", 1.5}, {"oolong", 1.5},
                          {"herbal", 0.75}, {"jasmine", 0.75}, {"leaf", 0.5}, {"茉莉", 0.75}};
    lex.negative_terms = {{"coffee", 1.5}, {"咖啡", 1.5}, {"cookie", 1.0}, {"juice", 1.0}, {"soap", 1.5},
                          {"餅乾", 1.0}, {"milk", 0.5}};
  } else {
    category_family(category);
  }
  return lex;
}

}  // namespace laud
