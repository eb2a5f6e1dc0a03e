#include <cctype>
#include <stdexcept>
#include <string>

#include "mlcal/random.hpp"
#include "mlcal/synthetic.hpp"

namespace mlcal {

void SyntheticSpec::validate() const {
  if (rates.size() != schema.size()) {
    throw std::invalid_argument("synthetic spec: need one rate per label");
  }
  for (double r : rates) {
    if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("synthetic spec: rates must lie in (0, 1)");
  }
  if (!(noise >= 0.0 && noise < 0.5)) {
    throw std::invalid_argument("synthetic spec: noise must lie in [0, 0.5)");
  }
  if (background_vocab == 0 || signal_vocab == 0) {
    throw std::invalid_argument("synthetic spec: vocabularies must be non-empty");
  }
  if (min_words == 0 || max_words < min_words) {
    throw std::invalid_argument("synthetic spec: bad word-count range");
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec, const PreprocessConfig& pcfg) {
  spec.validate();
  const std::size_t L = spec.schema.size();
  Rng label_rng(derive_seed(spec.seed, 1));
  Rng text_rng(derive_seed(spec.seed, 2));

  const auto background = [&] {
    // Squaring a uniform draw skews toward low indices, a crude Zipf tail.
    const double u = text_rng.unit();
    return "w" + std::to_string(static_cast<std::size_t>(u * u * spec.background_vocab));
  };

  Dataset ds;
  ds.schema = spec.schema;
  ds.instances.reserve(spec.instances);
  for (std::size_t i = 0; i < spec.instances; ++i) {
    Instance inst;
    inst.id = "syn-" + std::to_string(i);
    inst.labels.resize(L);
    std::vector<bool> signalled(L);
    for (std::size_t j = 0; j < L; ++j) {
      const double r = spec.rates[j];
      const bool gold = label_rng.bernoulli(r);
      const double flip = gold ? spec.noise : spec.noise * r / (1.0 - r);
      inst.labels[j] = gold ? 1 : 0;
      signalled[j] = label_rng.bernoulli(flip) ? !gold : gold;
    }

    std::vector<std::string> words;
    const std::size_t n_words =
        spec.min_words + text_rng.below(spec.max_words - spec.min_words + 1);
    for (std::size_t k = 0; k < n_words; ++k) words.push_back(background());
    for (std::size_t j = 0; j < L; ++j) {
      if (!signalled[j]) continue;
      for (std::size_t k = 0; k < spec.signal_words; ++k) {
        const std::string token =
            "s" + std::to_string(j) + "x" + std::to_string(text_rng.below(spec.signal_vocab));
        words.insert(words.begin() + static_cast<std::ptrdiff_t>(text_rng.below(words.size() + 1)),
                     token);
      }
    }

    if (text_rng.bernoulli(0.1)) {
      std::string& w = words[text_rng.below(words.size())];
      for (char& c : w) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    if (text_rng.bernoulli(0.1)) {
      std::string& w = words[text_rng.below(words.size())];
      w.insert(w.begin(), '#');
    }
    std::string raw;
    if (text_rng.bernoulli(0.2)) raw = "@user" + std::to_string(text_rng.below(50)) + " ";
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (k) raw += ' ';
      raw += words[k];
    }
    if (text_rng.bernoulli(0.15)) raw += " https://t.co/" + std::to_string(text_rng.below(100000));

    inst.raw_text = std::move(raw);
    inst.text = preprocess(inst.raw_text, pcfg);
    ds.instances.push_back(std::move(inst));
  }
  return ds;
}

}  // namespace mlcal
