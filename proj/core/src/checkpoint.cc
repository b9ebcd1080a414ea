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

#include "kpgen/checkpoint.h"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace kpgen {
namespace {

constexpr char kMagic[8] = {'K', 'P', 'G', 'C', 'K', 'P', 'T', '1'};

nlohmann::json config_to_json(const PhrasenessConfig& c) {
  return {{"enc_layers", c.enc_layers},   {"dec_layers", c.dec_layers},
          {"d_model", c.d_model},         {"heads", c.heads},
          {"pos_emb_dim", c.pos_emb_dim}, {"ff_dim", c.ff_dim},
          {"enc_vocab", c.enc_vocab},     {"dec_vocab", c.dec_vocab},
          {"dropout", c.dropout},         {"max_src_len", c.max_src_len},
          {"max_ref_len", c.max_ref_len}, {"max_tgt_len", c.max_tgt_len},
          {"use_pos", c.use_pos}};
}

PhrasenessConfig config_from_json(const nlohmann::json& j) {
  PhrasenessConfig c;
  c.enc_layers = j.at("enc_layers").get<int>();
  c.dec_layers = j.at("dec_layers").get<int>();
  c.d_model = j.at("d_model").get<int>();
  c.heads = j.at("heads").get<int>();
  c.pos_emb_dim = j.at("pos_emb_dim").get<int>();
  c.ff_dim = j.at("ff_dim").get<int>();
  c.enc_vocab = j.at("enc_vocab").get<int>();
  c.dec_vocab = j.at("dec_vocab").get<int>();
  c.dropout = j.at("dropout").get<double>();
  c.max_src_len = j.at("max_src_len").get<int>();
  c.max_ref_len = j.at("max_ref_len").get<int>();
  c.max_tgt_len = j.at("max_tgt_len").get<int>();
  c.use_pos = j.at("use_pos").get<bool>();
  return c;
}

}  // namespace

void save_checkpoint(const PhrasenessModel& model,
                     const std::filesystem::path& path) {
  const Vocabularies& v = model.vocabularies();
  nlohmann::json header;
  header["config"] = config_to_json(model.config());
  header["encoder_vocab"] = v.encoder.words();
  header["decoder_vocab"] = v.decoder.words();
  header["pos_lexicon"] = v.pos.entries();
  nlohmann::json table = nlohmann::json::array();
  for (const Parameter* p : model.parameters()) {
    table.push_back({{"name", p->name}, {"rows", p->value.rows()},
                     {"cols", p->value.cols()}});
  }
  header["tensors"] = std::move(table);
  const std::string text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const uint64_t len = text.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof(len));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  for (const Parameter* p : model.parameters()) {
    out.write(reinterpret_cast<const char*>(p->value.data()),
              static_cast<std::streamsize>(p->value.size() * sizeof(double)));
  }
  if (!out) throw std::runtime_error("failed writing checkpoint " + path.string());
}

PhrasenessModel load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path.string());
  const std::string where = path.string() + ": ";
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError(where + "not a kpgen checkpoint");
  }
  uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof(len));
  if (!in || len > (uint64_t{1} << 34)) throw FormatError(where + "bad header length");
  std::string text(len, '\0');
  in.read(text.data(), static_cast<std::streamsize>(len));
  if (!in) throw FormatError(where + "truncated header");

  nlohmann::json header;
  PhrasenessConfig config;
  Vocabularies vocabs;
  try {
    header = nlohmann::json::parse(text);
    config = config_from_json(header.at("config"));
    config.validate();
    const auto enc = header.at("encoder_vocab").get<std::vector<std::string>>();
    const auto dec = header.at("decoder_vocab").get<std::vector<std::string>>();
    vocabs.encoder = Vocabulary(enc);
    vocabs.decoder = Vocabulary(dec);
    for (const auto& [word, tag] : header.at("pos_lexicon").items()) {
      vocabs.pos.set(word, tag.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(where + "bad header: " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(where + e.what());
  }

  PhrasenessModel model(config, std::move(vocabs), 0);
  const auto& table = header.at("tensors");
  std::vector<Parameter*> params = model.parameters();
  if (table.size() != params.size()) {
    throw FormatError(where + "tensor count does not match the configuration");
  }
  for (size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    const auto& t = table[i];
    if (t.at("name").get<std::string>() != p.name ||
        t.at("rows").get<long>() != p.value.rows() ||
        t.at("cols").get<long>() != p.value.cols()) {
      throw FormatError(where + "tensor " + t.at("name").get<std::string>() +
                        " does not match the configuration");
    }
    in.read(reinterpret_cast<char*>(p.value.data()),
            static_cast<std::streamsize>(p.value.size() * sizeof(double)));
    if (!in) throw FormatError(where + "truncated tensor data");
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw FormatError(where + "trailing data after tensors");
  }
  return model;
}

}  // namespace kpgen
