#pragma once

#include <cstddef>
#include <vector>

namespace laud {

/// Character n-gram hashing layout.
struct FeatureSpec {
  std::vector<int> ngram_orders{1, 2, 3};
  std::size_t feature_dim = std::size_t{1} << 18;  // power of two

  void validate() const;
  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

struct AdamHyperparameters {
  // Fine-tuning rate used for large pretrained backends; the reference
  // logistic model trains with `reference_lr` instead.
  static constexpr double backend_lr = 1e-5;
  static constexpr double reference_lr = 0.05;

  double lr = reference_lr;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double weight_decay = 0.01;
  double epsilon = 1e-8;

  void validate() const;
  friend bool operator==(const AdamHyperparameters&, const AdamHyperparameters&) = default;
};

struct TrainOptions {
  int epochs = 30;
  int batch_size = 16;  // sets smaller than this train full-batch
  bool warm_start = false;
  AdamHyperparameters adam;

  void validate() const;
  friend bool operator==(const TrainOptions&, const TrainOptions&) = default;
};

struct ModelOptions {
  FeatureSpec features;
  TrainOptions training;

  void validate() const {
    features.validate();
    training.validate();
  }
  friend bool operator==(const ModelOptions&, const ModelOptions&) = default;
};

}  // namespace laud
