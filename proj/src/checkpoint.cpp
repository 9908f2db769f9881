//
// rxpj - reaction practicality judgment from SMILES text
// SPDX-License-Identifier: Apache-2.0
//

#include "rxpj/checkpoint.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "rxpj/errors.h"

namespace rxpj {
namespace {
constexpr char kMagic[4] = { 'R', 'X', 'P', 'J' };

class Writer {
public:
  void u32(std::uint32_t v) {
    for (int k = 0; k < 4; ++k)
      buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int k = 0; k < 8; ++k)
      buf_.push_back(static_cast<char>((v >> (8 * k)) & 0xFF));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void bytes(std::string_view s) { buf_.insert(buf_.end(), s.begin(), s.end()); }

  std::string &buffer() { return buf_; }

private:
  std::string buf_;
};

class Reader {
public:
  explicit Reader(std::string_view data): data_(data) { }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int k = 0; k < 4; ++k)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + k]))
           << (8 * k);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    const std::uint64_t lo = u32();
    const std::uint64_t hi = u32();
    return lo | (hi << 32);
  }
  float f32() { return std::bit_cast<float>(u32()); }
  std::string_view bytes(std::size_t n) {
    need(n);
    std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == data_.size(); }

private:
  void need(std::size_t n) const {
    if (data_.size() - pos_ < n)
      throw CheckpointError("checkpoint truncated");
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

const char *mode_name(SegmentMode m) {
  return m == SegmentMode::kGreedy ? "greedy" : "global";
}

std::size_t parse_size(const std::string &v, const std::string &key) {
  std::size_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw CheckpointError("bad integer for " + key);
  return out;
}

double parse_double(const std::string &v, const std::string &key) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size())
      return d;
  } catch (const std::exception &) {
  }
  throw CheckpointError("bad number for " + key);
}
} // namespace

void save_checkpoint(const std::filesystem::path &path, const Checkpoint &ckpt) {
  const Artifacts &a = ckpt.artifacts;
  const ModelDims &dims = a.params.dims;

  std::ostringstream header;
  header << std::setprecision(std::numeric_limits<double>::max_digits10);
  header << "format=rxpj-checkpoint\n"
         << "embed=" << dims.embed << '\n'
         << "hidden=" << dims.hidden << '\n'
         << "max_len=" << dims.max_len << '\n'
         << "vocab_size=" << a.vocab.size() << '\n'
         << "threshold=" << a.threshold << '\n'
         << "use_rsd=" << (a.features.use_rsd ? 1 : 0) << '\n'
         << "use_dlg=" << (a.features.use_dlg ? 1 : 0) << '\n'
         << "segment_mode=" << mode_name(a.features.segment_mode) << '\n';
  for (const auto &[k, v]: ckpt.metadata)
    header << "meta." << k << '=' << v << '\n';
  for (std::size_t i = 0; i < a.vocab.size(); ++i)
    header << "vocab." << i << '=' << a.vocab.tokens()[i] << '\n';
  std::size_t n = 0;
  for (const auto &[word, g]: a.lexicon.ranked())
    header << "lexicon." << n++ << '=' << word << '\t' << g << '\n';

  Writer w;
  w.bytes(std::string_view(kMagic, 4));
  w.u32(kCheckpointVersion);
  w.u64(0);  // patched below
  const std::string text = header.str();
  w.u32(static_cast<std::uint32_t>(text.size()));
  w.bytes(text);

  std::uint32_t count = 0;
  a.params.for_each([&count](const std::string &, const Mat<float> &) {
    ++count;
  });
  w.u32(count);
  a.params.for_each([&w](const std::string &name, const Mat<float> &m) {
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.bytes(name);
    w.u32(2);
    w.u32(static_cast<std::uint32_t>(m.rows()));
    w.u32(static_cast<std::uint32_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
      for (Eigen::Index c = 0; c < m.cols(); ++c)
        w.f32(m(r, c));
  });

  std::string &buf = w.buffer();
  const std::uint64_t total = buf.size();
  for (int k = 0; k < 8; ++k)
    buf[8 + k] = static_cast<char>((total >> (8 * k)) & 0xFF);

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os)
    throw IoError("cannot write checkpoint " + path.string());
  os.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!os)
    throw IoError("failed writing checkpoint " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw IoError("cannot open checkpoint " + path.string());
  const std::string data((std::istreambuf_iterator<char>(is)),
                         std::istreambuf_iterator<char>());

  Reader r(data);
  if (r.bytes(4) != std::string_view(kMagic, 4))
    throw CheckpointError("bad magic in " + path.string());
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion)
    throw CheckpointError("unsupported checkpoint version "
                          + std::to_string(version));
  if (r.u64() != data.size())
    throw CheckpointError("checkpoint byte count mismatch");

  const std::string text(r.bytes(r.u32()));
  std::map<std::string, std::string> kv;
  Checkpoint ckpt;
  Artifacts &a = ckpt.artifacts;
  std::vector<std::pair<std::size_t, std::string>> vocab_entries;
  std::vector<std::pair<std::size_t, std::string>> lexicon_entries;

  std::istringstream hs(text);
  std::string line;
  while (std::getline(hs, line)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw CheckpointError("bad header line '" + line + "'");
    std::string key = line.substr(0, eq), value = line.substr(eq + 1);
    if (key.starts_with("vocab.") && key != "vocab_size")
      vocab_entries.emplace_back(parse_size(key.substr(6), key), value);
    else if (key.starts_with("lexicon."))
      lexicon_entries.emplace_back(parse_size(key.substr(8), key), value);
    else if (key.starts_with("meta."))
      ckpt.metadata.emplace_back(key.substr(5), value);
    else
      kv[key] = value;
  }

  auto get = [&kv](const std::string &key) -> const std::string & {
    auto it = kv.find(key);
    if (it == kv.end())
      throw CheckpointError("missing header key " + key);
    return it->second;
  };

  ModelDims dims;
  dims.embed = parse_size(get("embed"), "embed");
  dims.hidden = parse_size(get("hidden"), "hidden");
  dims.max_len = parse_size(get("max_len"), "max_len");
  dims.vocab = parse_size(get("vocab_size"), "vocab_size");
  a.threshold = parse_double(get("threshold"), "threshold");
  a.features.use_rsd = get("use_rsd") == "1";
  a.features.use_dlg = get("use_dlg") == "1";
  a.features.segment_mode = get("segment_mode") == "global"
                                ? SegmentMode::kGlobal
                                : SegmentMode::kGreedy;

  std::sort(vocab_entries.begin(), vocab_entries.end());
  if (vocab_entries.size() != dims.vocab)
    throw CheckpointError("vocabulary size mismatch");
  for (std::size_t i = 0; i < vocab_entries.size(); ++i) {
    if (vocab_entries[i].first != i
        || a.vocab.add(vocab_entries[i].second) != static_cast<TokenId>(i))
      throw CheckpointError("vocabulary ids are not dense");
  }

  for (const auto &[idx, entry]: lexicon_entries) {
    const std::size_t tab = entry.rfind('\t');
    if (tab == std::string::npos)
      throw CheckpointError("bad lexicon entry " + std::to_string(idx));
    std::string word = entry.substr(0, tab);
    const std::size_t n = 1 + std::count(word.begin(), word.end(), ' ');
    a.lexicon.insert_key(std::move(word), n,
                         parse_double(entry.substr(tab + 1), "lexicon"));
  }

  a.params = ModelParams<float>::zeros(dims);
  const std::uint32_t count = r.u32();
  std::uint32_t seen = 0;
  a.params.for_each([&](const std::string &name, Mat<float> &m) {
    if (seen++ >= count)
      throw CheckpointError("checkpoint has too few tensors");
    const std::string_view stored = r.bytes(r.u32());
    if (stored != name)
      throw CheckpointError("expected tensor " + name + ", found "
                            + std::string(stored));
    const std::uint32_t rank = r.u32();
    const std::uint32_t rows = r.u32(), cols = r.u32();
    if (rank != 2 || rows != m.rows() || cols != m.cols())
      throw CheckpointError("shape mismatch for tensor " + name);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        m(i, j) = r.f32();
  });
  if (seen != count || !r.done())
    throw CheckpointError("unexpected trailing data in checkpoint");
  return ckpt;
}

std::string metadata_value(const Checkpoint &ckpt, const std::string &key,
                           const std::string &fallback) {
  for (const auto &[k, v]: ckpt.metadata)
    if (k == key)
      return v;
  return fallback;
}

} // namespace rxpj
