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

#include "kpgen/training.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace kpgen {

std::vector<TrainingInstance> make_training_instances(
    const PhrasenessModel& model, const Document& doc,
    std::span<const Phrase> noun_phrases, std::span<const Reference> references,
    double mask_prob, std::mt19937_64& rng) {
  const int max_words = model.config().max_tgt_len - 1;
  std::vector<Phrase> kept, dropped;
  std::bernoulli_distribution coin(mask_prob);
  for (const Reference& r : references) {
    if (coin(rng)) {
      dropped.push_back(r.phrase);
    } else {
      kept.push_back(r.phrase);
    }
  }
  std::vector<Phrase> all_refs;
  for (const Reference& r : references) all_refs.push_back(r.phrase);

  auto full = std::make_shared<const AugmentedInput>(
      model.augment(doc.tokens, doc.tags, all_refs));
  std::shared_ptr<const AugmentedInput> masked;
  if (!dropped.empty()) {
    masked = std::make_shared<const AugmentedInput>(
        model.augment(doc.tokens, doc.tags, kept));
  }

  std::vector<TrainingInstance> out;
  auto fits = [&](const Phrase& p) {
    return !p.tokens.empty() && static_cast<int>(p.tokens.size()) <= max_words;
  };
  for (const Phrase& np : noun_phrases) {
    if (!fits(np)) continue;
    TrainingInstance inst;
    inst.input = full;
    inst.target.tokens = np.tokens;
    if (auto pos = first_occurrence(np, doc)) {
      const size_t begin = static_cast<size_t>(*pos - 1);
      if (begin + np.tokens.size() <= doc.tags.size()) {
        inst.target.tags.assign(doc.tags.begin() + begin,
                                doc.tags.begin() + begin + np.tokens.size());
      }
    }
    out.push_back(std::move(inst));
  }
  for (const Phrase& r : kept) {
    if (!fits(r)) continue;
    out.push_back({full, {r.tokens, {}}, true, false});
  }
  for (const Phrase& r : dropped) {
    if (!fits(r)) continue;
    out.push_back({masked, {r.tokens, {}}, true, true});
  }
  return out;
}

double learning_rate_at(const TrainSchedule& schedule, int epoch) {
  const int every = std::max(1, schedule.decay_every);
  return schedule.learning_rate * std::pow(schedule.decay, epoch / every);
}

Adam::Adam(std::vector<Parameter*> params, double beta1, double beta2, double eps)
    : params_(std::move(params)), beta1_(beta1), beta2_(beta2), eps_(eps) {
  for (Parameter* p : params_) {
    m_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Matrix::Zero(p->value.rows(), p->value.cols()));
  }
}

void Adam::step(double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (size_t i = 0; i < params_.size(); ++i) {
    Parameter& p = *params_[i];
    if (p.grad.size() != p.value.size()) {
      p.zero_grad();
      continue;
    }
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * p.grad;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * p.grad.cwiseProduct(p.grad);
    p.value.array() -=
        lr * (m_[i].array() / c1) / ((v_[i].array() / c2).sqrt() + eps_);
    p.grad.setZero();
  }
}

double clip_global_norm(std::span<Parameter* const> params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params) {
    if (p->grad.size()) sq += p->grad.squaredNorm();
  }
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double s = max_norm / norm;
    for (Parameter* p : params) {
      if (p->grad.size()) p->grad *= s;
    }
  }
  return norm;
}

namespace {

// Consecutive runs of instances that share an input.
std::vector<std::pair<size_t, size_t>> runs_by_input(
    std::span<const TrainingInstance* const> batch) {
  std::vector<std::pair<size_t, size_t>> runs;
  size_t begin = 0;
  for (size_t i = 1; i <= batch.size(); ++i) {
    if (i == batch.size() || batch[i]->input != batch[begin]->input) {
      runs.emplace_back(begin, i);
      begin = i;
    }
  }
  return runs;
}

double run_batch(PhrasenessModel& model,
                 std::span<const TrainingInstance* const> batch,
                 std::mt19937_64* rng, bool backward, double scale) {
  double total = 0.0;
  for (auto [b, e] : runs_by_input(batch)) {
    std::vector<DecoderTarget> targets;
    for (size_t i = b; i < e; ++i) targets.push_back(batch[i]->target);
    Graph g;
    Graph::Var loss = model.loss(g, *batch[b]->input, targets, rng);
    const double value = g.value(loss)(0, 0);
    if (!std::isfinite(value)) return value;
    total += value;
    if (backward) g.backward(g.scale(loss, scale));
  }
  return total;
}

}  // namespace

double mean_sequence_nll(PhrasenessModel& model,
                         std::span<const TrainingInstance> instances) {
  if (instances.empty()) return 0.0;
  std::vector<const TrainingInstance*> ptrs;
  for (const TrainingInstance& inst : instances) ptrs.push_back(&inst);
  std::stable_sort(ptrs.begin(), ptrs.end(), [](auto* a, auto* b) {
    return a->input.get() < b->input.get();
  });
  const double total = run_batch(model, ptrs, nullptr, false, 1.0);
  return total / static_cast<double>(instances.size());
}

TrainResult train(PhrasenessModel& model,
                  std::span<const TrainingInstance> instances,
                  const TrainSchedule& schedule) {
  if (schedule.batch_size < 1) throw std::invalid_argument("batch_size must be >= 1");
  TrainResult result;
  if (instances.empty()) return result;

  std::map<const AugmentedInput*, std::vector<const TrainingInstance*>> groups_map;
  std::vector<const AugmentedInput*> order;
  for (const TrainingInstance& inst : instances) {
    auto [it, inserted] = groups_map.try_emplace(inst.input.get());
    if (inserted) order.push_back(inst.input.get());
    it->second.push_back(&inst);
  }
  std::vector<std::vector<const TrainingInstance*>> groups;
  for (const AugmentedInput* key : order) groups.push_back(groups_map[key]);

  std::vector<Parameter*> params = model.parameters();
  for (Parameter* p : params) p->zero_grad();
  Adam adam(params, schedule.beta1, schedule.beta2, schedule.adam_eps);
  std::mt19937_64 rng(schedule.seed);

  for (int epoch = 0; epoch < schedule.epochs; ++epoch) {
    std::shuffle(groups.begin(), groups.end(), rng);
    std::vector<const TrainingInstance*> flat;
    flat.reserve(instances.size());
    for (auto& group : groups) {
      std::shuffle(group.begin(), group.end(), rng);
      flat.insert(flat.end(), group.begin(), group.end());
    }
    const double lr = learning_rate_at(schedule, epoch);
    double epoch_total = 0.0;
    for (size_t start = 0; start < flat.size();
         start += static_cast<size_t>(schedule.batch_size)) {
      const size_t end =
          std::min(flat.size(), start + static_cast<size_t>(schedule.batch_size));
      std::span<const TrainingInstance* const> batch(flat.data() + start, end - start);
      const double total = run_batch(model, batch, &rng, true,
                                     1.0 / static_cast<double>(batch.size()));
      if (!std::isfinite(total)) {
        std::ostringstream msg;
        msg << "training diverged: non-finite loss at epoch " << epoch + 1
            << ", update " << result.updates + 1 << " (lr " << lr << ")";
        throw TrainingDiverged(msg.str());
      }
      epoch_total += total;
      clip_global_norm(params, schedule.clip_norm);
      adam.step(lr);
      ++result.updates;
    }
    const double mean = epoch_total / static_cast<double>(flat.size());
    result.epoch_loss.push_back(mean);
    if (schedule.on_epoch) schedule.on_epoch(epoch, mean);
  }
  return result;
}

}  // namespace kpgen
