#include "outfit/tuple_index.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <numeric>
#include <unordered_set>

#include "outfit/error.hpp"

namespace outfit {
namespace {

constexpr char kMagic[4] = {'O', 'T', 'I', 'X'};
constexpr std::uint8_t kVersion = 1;

void put_u32(std::ostream& out, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_u64(std::ostream& out, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) out.put(static_cast<char>((v >> (8 * b)) & 0xff));
}

void put_string(std::ostream& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

class Reader {
 public:
  Reader(std::istream& in, const std::string& path) : in_(in), path_(path) {}

  void bytes(char* dst, std::size_t n) {
    in_.read(dst, static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n)
      throw Error(ErrorCode::ParseError, "truncated index file: " + path_);
  }
  std::uint64_t uint(int width) {
    unsigned char buf[8];
    bytes(reinterpret_cast<char*>(buf), static_cast<std::size_t>(width));
    std::uint64_t v = 0;
    for (int b = 0; b < width; ++b) v |= static_cast<std::uint64_t>(buf[b]) << (8 * b);
    return v;
  }
  std::string string() {
    const auto len = uint(4);
    std::string s(len, '\0');
    bytes(s.data(), len);
    return s;
  }

 private:
  std::istream& in_;
  const std::string& path_;
};

}  // namespace

double distance(const ColorHistogram& a, const ColorHistogram& b) {
  return kernels::l1_distance(a.bins.data(), b.bins.data());
}

TupleIndex TupleIndex::build(std::vector<OutfitTuple> tuples) {
  if (tuples.empty()) throw Error(ErrorCode::EmptyTrainingSet, "no tuples to index");
  std::unordered_set<std::string_view> seen;
  for (const auto& t : tuples)
    if (!seen.insert(t.tuple_id).second)
      throw Error(ErrorCode::DuplicateTupleId, "duplicate tuple_id: " + t.tuple_id);

  TupleIndex index;
  const std::size_t n = tuples.size();
  index.ids_.reserve(n);
  index.tops_.reserve(n);
  index.matrix_.reserve(n * kHistogramSize);
  for (auto& t : tuples) {
    index.matrix_.insert(index.matrix_.end(), t.skirt_feature.bins.begin(), t.skirt_feature.bins.end());
    index.ids_.push_back(std::move(t.tuple_id));
    index.tops_.push_back(std::move(t.top_item_id));
  }

  std::vector<std::uint32_t> by_id(n);
  std::iota(by_id.begin(), by_id.end(), 0u);
  std::sort(by_id.begin(), by_id.end(),
            [&](std::uint32_t a, std::uint32_t b) { return index.ids_[a] < index.ids_[b]; });
  index.order_keys_.resize(n);
  for (std::uint32_t rank = 0; rank < n; ++rank) index.order_keys_[by_id[rank]] = rank;
  return index;
}

ColorHistogram TupleIndex::skirt_feature(std::size_t row) const {
  ColorHistogram h;
  std::copy_n(matrix_.begin() + static_cast<std::ptrdiff_t>(row * kHistogramSize), kHistogramSize,
              h.bins.begin());
  return h;
}

OutfitTuple TupleIndex::tuple(std::size_t row) const {
  return {ids_[row], skirt_feature(row), tops_[row]};
}

std::vector<Neighbor> TupleIndex::to_neighbors(const std::vector<kernels::ScanHit>& hits) const {
  std::vector<Neighbor> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back({tops_[h.row], ids_[h.row], h.distance, out.size() + 1});
  return out;
}

std::vector<Neighbor> TupleIndex::query(const ColorHistogram& q, std::size_t k) const {
  if (size() == 0) throw Error(ErrorCode::EmptyIndex, "index is empty");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  return to_neighbors(kernels::topk_scan(matrix(), q, k));
}

std::vector<std::vector<Neighbor>> TupleIndex::query_batch(std::span<const ColorHistogram> queries,
                                                           std::size_t k, Execution exec) const {
  if (size() == 0) throw Error(ErrorCode::EmptyIndex, "index is empty");
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  const auto hits = exec == Execution::Parallel ? kernels::topk_batch_omp(matrix(), queries, k)
                                                : kernels::topk_batch_serial(matrix(), queries, k);
  std::vector<std::vector<Neighbor>> out;
  out.reserve(hits.size());
  for (const auto& h : hits) out.push_back(to_neighbors(h));
  return out;
}

void TupleIndex::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open for writing: " + path);
  out.write(kMagic, 4);
  out.put(static_cast<char>(kVersion));
  put_u64(out, size());
  for (std::size_t r = 0; r < size(); ++r) {
    put_string(out, ids_[r]);
    for (std::size_t i = 0; i < kHistogramSize; ++i)
      put_u64(out, std::bit_cast<std::uint64_t>(matrix_[r * kHistogramSize + i]));
    put_string(out, tops_[r]);
  }
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path);
}

TupleIndex TupleIndex::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open index: " + path);
  Reader rd(in, path);
  char magic[4];
  rd.bytes(magic, 4);
  if (!std::equal(magic, magic + 4, kMagic))
    throw Error(ErrorCode::ParseError, "not an outfit tuple index: " + path);
  const auto version = rd.uint(1);
  if (version != kVersion)
    throw Error(ErrorCode::ParseError, "unsupported index version " + std::to_string(version));
  const auto n = rd.uint(8);
  std::vector<OutfitTuple> tuples;
  tuples.reserve(n);
  for (std::uint64_t r = 0; r < n; ++r) {
    OutfitTuple t;
    t.tuple_id = rd.string();
    for (auto& bin : t.skirt_feature.bins) bin = std::bit_cast<double>(rd.uint(8));
    t.top_item_id = rd.string();
    tuples.push_back(std::move(t));
  }
  return build(std::move(tuples));
}

}  // namespace outfit
