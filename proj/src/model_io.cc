// Model container layout, all integers little-endian:
//
//   "NERKCRF\0"                magic, 8 bytes
//   u32 version                currently 1
//   u64 template hash
//   f64 l1, f64 l2, i32 max_epochs, i32 patience,
//   f64 eta_plus, eta_minus, delta_init, delta_min, delta_max, u64 seed
//   u32 K, then K tags         each u32 length + UTF-8 bytes
//   u32 F, then F feature keys
//   F*K + K*K f64 weights      IEEE-754 bit patterns
//   u64 FNV-1a of everything above

#include <cstring>
#include <fstream>
#include <sstream>

#include "nerkit/crf.h"

namespace nerkit::crf {

namespace {

constexpr char kMagic[8] = {'N', 'E', 'R', 'K', 'C', 'R', 'F', '\0'};
constexpr uint32_t kVersion = 1;

uint64_t fnv1a(std::string_view bytes) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

class Writer {
 public:
  void u32(uint32_t v) { le(v, 4); }
  void u64(uint64_t v) { le(v, 8); }
  void i32(int32_t v) { u32(static_cast<uint32_t>(v)); }
  void f64(double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    u64(bits);
  }
  void str(const std::string& s) {
    u32(static_cast<uint32_t>(s.size()));
    out_ += s;
  }
  void raw(const char* p, size_t n) { out_.append(p, n); }
  std::string& bytes() { return out_; }

 private:
  void le(uint64_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  }
  std::string out_;
};

class Reader {
 public:
  explicit Reader(std::string_view in) : in_(in) {}

  uint32_t u32() { return static_cast<uint32_t>(le(4)); }
  uint64_t u64() { return le(8); }
  int32_t i32() { return static_cast<int32_t>(u32()); }
  double f64() {
    uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, sizeof v);
    return v;
  }
  std::string str() {
    uint32_t n = u32();
    need(n);
    std::string s(in_.substr(pos_, n));
    pos_ += n;
    return s;
  }
  void expect(const char* p, size_t n) {
    need(n);
    if (in_.substr(pos_, n) != std::string_view(p, n)) throw ModelError("not a model file (bad magic)");
    pos_ += n;
  }
  // Guards counts read from the file before allocating.
  void check_count(uint64_t count, size_t min_bytes_each) const {
    if (count > (in_.size() - pos_) / std::max<size_t>(min_bytes_each, 1)) {
      throw ModelError("corrupt model file: count exceeds file size");
    }
  }
  size_t pos() const { return pos_; }

 private:
  void need(size_t n) const {
    if (in_.size() - pos_ < n) throw ModelError("corrupt model file: truncated");
  }
  uint64_t le(int n) {
    need(n);
    uint64_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<uint64_t>(static_cast<unsigned char>(in_[pos_ + i])) << (8 * i);
    pos_ += n;
    return v;
  }
  std::string_view in_;
  size_t pos_ = 0;
};

}  // namespace

std::string serialize(const Model& model) {
  Writer w;
  w.raw(kMagic, sizeof kMagic);
  w.u32(kVersion);
  w.u64(model.template_hash());
  const TrainConfig& c = model.config();
  w.f64(c.l1);
  w.f64(c.l2);
  w.i32(c.max_epochs);
  w.i32(c.patience);
  w.f64(c.rprop.eta_plus);
  w.f64(c.rprop.eta_minus);
  w.f64(c.rprop.delta_init);
  w.f64(c.rprop.delta_min);
  w.f64(c.rprop.delta_max);
  w.u64(c.seed);
  w.u32(static_cast<uint32_t>(model.num_tags()));
  for (const auto& t : model.tags()) w.str(t);
  w.u32(static_cast<uint32_t>(model.num_features()));
  for (const auto& f : model.features()) w.str(f);
  for (double v : model.weights()) w.f64(v);
  uint64_t checksum = fnv1a(w.bytes());
  w.u64(checksum);
  return std::move(w.bytes());
}

Model deserialize(std::string_view bytes, std::optional<uint64_t> expected_hash) {
  if (bytes.size() < sizeof kMagic + 8) throw ModelError("corrupt model file: truncated");
  Reader r(bytes);
  r.expect(kMagic, sizeof kMagic);
  uint32_t version = r.u32();
  if (version != kVersion) {
    throw ModelError("unsupported model version " + std::to_string(version));
  }
  std::string_view payload = bytes.substr(0, bytes.size() - 8);
  Reader tail(bytes.substr(bytes.size() - 8));
  if (fnv1a(payload) != tail.u64()) throw ModelError("corrupt model file: checksum mismatch");

  uint64_t hash = r.u64();
  if (expected_hash && *expected_hash != hash) {
    std::ostringstream msg;
    msg << std::hex << "model was trained with feature template hash " << hash
        << " but the active extractor has " << *expected_hash
        << " (different gazetteers or feature templates)";
    throw ModelError(msg.str());
  }
  TrainConfig c;
  c.l1 = r.f64();
  c.l2 = r.f64();
  c.max_epochs = r.i32();
  c.patience = r.i32();
  c.rprop.eta_plus = r.f64();
  c.rprop.eta_minus = r.f64();
  c.rprop.delta_init = r.f64();
  c.rprop.delta_min = r.f64();
  c.rprop.delta_max = r.f64();
  c.seed = r.u64();

  uint32_t k = r.u32();
  r.check_count(k, 4);
  std::vector<std::string> tags(k);
  for (auto& t : tags) t = r.str();
  uint32_t f = r.u32();
  r.check_count(f, 4);
  std::vector<std::string> keys(f);
  for (auto& key : keys) key = r.str();

  Model model;
  try {
    model = Model(std::move(tags), std::move(keys), hash);
  } catch (const ModelError&) {
    throw;
  } catch (const Error& e) {
    throw ModelError(std::string("corrupt model file: ") + e.what());
  }
  model.set_config(c);
  std::span<double> w = model.weights();
  r.check_count(w.size(), 8);
  for (double& v : w) v = r.f64();
  if (r.pos() != payload.size()) throw ModelError("corrupt model file: trailing bytes");
  return model;
}

void save(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write model file " + path);
  std::string bytes = serialize(model);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("error writing model file " + path);
}

Model load(const std::string& path, std::optional<uint64_t> expected_hash) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize(buf.str(), expected_hash);
}

}  // namespace nerkit::crf
