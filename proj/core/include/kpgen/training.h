// Copyright 2026 The kpgen Authors.
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

#ifndef KPGEN_TRAINING_H_
#define KPGEN_TRAINING_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "kpgen/phraseness.h"
#include "kpgen/retriever.h"

namespace kpgen {

struct TrainingInstance {
  std::shared_ptr<const AugmentedInput> input;
  DecoderTarget target;
  bool from_reference = false;
  // The reference was removed from `input`.
  bool masked = false;
};

// Self-supervised instances for one document. Every noun phrase and every
// reference becomes a target. A random subset of the references (each with
// probability mask_prob) is removed from a second copy of the input and those
// references are predicted from it; everything else is predicted from the
// full input. Targets longer than the model allows are skipped.
std::vector<TrainingInstance> make_training_instances(
    const PhrasenessModel& model, const Document& doc,
    std::span<const Phrase> noun_phrases, std::span<const Reference> references,
    double mask_prob, std::mt19937_64& rng);

struct TrainSchedule {
  int epochs = 15;
  double learning_rate = 1e-4;
  double decay = 0.9;
  int decay_every = 3;
  double clip_norm = 0.1;
  int batch_size = 64;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_eps = 1e-8;
  uint64_t seed = 0;
  // Called after every epoch with the epoch index and its mean loss.
  std::function<void(int, double)> on_epoch;
};

// lr for the zero-based epoch.
double learning_rate_at(const TrainSchedule& schedule, int epoch);

class TrainingDiverged : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Adam {
 public:
  Adam(std::vector<Parameter*> params, double beta1, double beta2, double eps);

  // One update from the accumulated gradients, which are then cleared.
  void step(double lr);
  long steps() const { return t_; }

 private:
  std::vector<Parameter*> params_;
  std::vector<Matrix> m_, v_;
  double beta1_, beta2_, eps_;
  long t_ = 0;
};

// Rescales all gradients so their joint L2 norm is at most max_norm; returns
// the norm before clipping.
double clip_global_norm(std::span<Parameter* const> params, double max_norm);

// Mean per-sequence negative log-likelihood without dropout.
double mean_sequence_nll(PhrasenessModel& model,
                         std::span<const TrainingInstance> instances);

struct TrainResult {
  std::vector<double> epoch_loss;
  long updates = 0;
};

// Mini-batch training. Instances sharing an input are kept adjacent so each
// batch encodes every distinct input once. Throws TrainingDiverged on a
// non-finite loss.
TrainResult train(PhrasenessModel& model,
                  std::span<const TrainingInstance> instances,
                  const TrainSchedule& schedule);

}  // namespace kpgen

#endif  // KPGEN_TRAINING_H_
