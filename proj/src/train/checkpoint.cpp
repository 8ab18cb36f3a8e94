//
// Copyright 2026 The Synthphore Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "synthphore/train/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "synthphore/util/error.hpp"
#include "synthphore/util/hash.hpp"

namespace synthphore::train {

namespace {

static_assert(std::endian::native == std::endian::little, "checkpoint IO assumes a little-endian host");

constexpr char kMagic[8] = {'S', 'Y', 'N', 'P', 'C', 'K', 'P', 'T'};

template <class T>
void put(std::string& out, T value) {
  char buf[sizeof(T)];
  std::memcpy(buf, &value, sizeof(T));
  out.append(buf, sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  template <class T>
  T get() {
    need(sizeof(T));
    T value;
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }

  std::string str(std::size_t n) {
    need(n);
    std::string s = bytes_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  void floats(float* dst, std::size_t n) {
    need(n * sizeof(float));
    std::memcpy(dst, bytes_.data() + pos_, n * sizeof(float));
    pos_ += n * sizeof(float);
  }

  bool done() const { return pos_ == end_; }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > end_) throw ChecksumError("checkpoint is truncated");
  }

  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t parse_hex64(const std::string& s) { return std::stoull(s, nullptr, 16); }

std::uint64_t digest_of(const std::string& bytes, std::size_t n) {
  Fnv1a64 h;
  h.update(std::string_view(bytes.data(), n));
  return h.digest();
}

}  // namespace

std::string serialize(const Checkpoint& ckpt) {
  nlohmann::json meta;
  meta["model"] = ckpt.model.config;
  meta["train"] = ckpt.train_config;
  meta["catalog_hash"] = hex64(ckpt.catalog_hash);
  meta["templates_hash"] = hex64(ckpt.templates_hash);
  const std::string json = meta.dump();

  std::string out(kMagic, sizeof kMagic);
  put<std::uint32_t>(out, ckpt.version);
  put<std::uint64_t>(out, json.size());
  out += json;
  const auto tensors = ckpt.model.tensors();
  put<std::uint32_t>(out, static_cast<std::uint32_t>(tensors.size()));
  for (const auto& [name, t] : tensors) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(name.size()));
    out += name;
    put<std::uint32_t>(out, 2);
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t->rows()));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(t->cols()));
    out.append(reinterpret_cast<const char*>(t->data()), static_cast<std::size_t>(t->size()) * sizeof(float));
  }
  put<std::uint64_t>(out, digest_of(out, out.size()));
  return out;
}

Checkpoint deserialize(const std::string& bytes) {
  if (bytes.size() < sizeof kMagic + 4 + 8 + 8 || std::memcmp(bytes.data(), kMagic, sizeof kMagic) != 0) {
    throw ChecksumError("not a checkpoint file");
  }
  const std::size_t body = bytes.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body, sizeof stored);
  if (stored != digest_of(bytes, body)) throw ChecksumError("checkpoint digest mismatch");

  Reader in(bytes, body);
  in.str(sizeof kMagic);
  Checkpoint ckpt;
  ckpt.version = in.get<std::uint32_t>();
  if (ckpt.version != kCheckpointVersion) {
    throw UnsupportedVersion("checkpoint version " + std::to_string(ckpt.version) + " is not supported");
  }
  const auto json_len = in.get<std::uint64_t>();
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(in.str(json_len));
    ckpt.train_config = meta.at("train").get<TrainConfig>();
    ckpt.catalog_hash = parse_hex64(meta.at("catalog_hash").get<std::string>());
    ckpt.templates_hash = parse_hex64(meta.at("templates_hash").get<std::string>());
    ckpt.model = nn::Model<float>(meta.at("model").get<nn::ModelConfig>(), 0);
  } catch (const nlohmann::json::exception& e) {
    throw ChecksumError(std::string("checkpoint header is malformed: ") + e.what());
  }
  auto tensors = ckpt.model.tensors();
  const auto count = in.get<std::uint32_t>();
  if (count != tensors.size()) throw ChecksumError("checkpoint tensor count differs from the model");
  for (auto& [name, t] : tensors) {
    const std::string stored_name = in.str(in.get<std::uint32_t>());
    if (stored_name != name) throw ChecksumError("unexpected tensor " + stored_name + ", wanted " + name);
    if (in.get<std::uint32_t>() != 2) throw ChecksumError("tensor " + name + " is not two-dimensional");
    const auto rows = in.get<std::uint64_t>();
    const auto cols = in.get<std::uint64_t>();
    if (rows != static_cast<std::uint64_t>(t->rows()) || cols != static_cast<std::uint64_t>(t->cols())) {
      throw ChecksumError("tensor " + name + " has the wrong shape");
    }
    in.floats(t->data(), static_cast<std::size_t>(t->size()));
  }
  if (!in.done()) throw ChecksumError("trailing bytes in checkpoint");
  return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  const std::string bytes = serialize(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open checkpoint " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

void check_catalog(const Checkpoint& ckpt, const synth::Catalog& catalog) {
  if (ckpt.catalog_hash != catalog.digest()) {
    throw CatalogMismatch("checkpoint was trained against a different building-block catalog");
  }
}

bool verify_checkpoint(const Checkpoint& ckpt, const std::vector<Example>& probes) {
  const Checkpoint back = deserialize(serialize(ckpt));
  for (const auto& ex : probes) {
    const auto [f, x] = nn::graph_tensors<float>(ex.graph);
    const auto a = ckpt.model.encoder.forward(f, x);
    const auto b = back.model.encoder.forward(f, x);
    const Mat<float> za = ckpt.model.decoder.forward(ex.tokens, a.h);
    const Mat<float> zb = back.model.decoder.forward(ex.tokens, b.h);
    if (za.size() != zb.size() || std::memcmp(za.data(), zb.data(), static_cast<std::size_t>(za.size()) * sizeof(float)) != 0) {
      return false;
    }
  }
  return true;
}

}  // namespace synthphore::train
