#include "physbc/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "physbc/error.hpp"
#include "physbc/random.hpp"

namespace physbc {

std::string to_string(SamplingScheme scheme) {
  return scheme == SamplingScheme::kUniformGrid ? "uniform-grid" : "iid-uniform";
}

SamplingScheme sampling_scheme_from_string(const std::string& text) {
  if (text == "uniform-grid" || text == "grid") return SamplingScheme::kUniformGrid;
  if (text == "iid-uniform" || text == "iid") return SamplingScheme::kIidUniform;
  fail(ErrorKind::kParse, "unknown sampling scheme '" + text + "'");
}

Dataset::Dataset(std::size_t dim, SamplingScheme scheme, RegionBox domain,
                 std::optional<std::uint64_t> seed)
    : dim_(dim), scheme_(scheme), domain_(std::move(domain)), seed_(seed) {
  if (dim_ == 0 || dim_ != domain_.dimension()) {
    fail(ErrorKind::kModelMismatch, "dataset dimension does not match its domain");
  }
}

SamplePair Dataset::pair(std::size_t i) const {
  auto x = state(i);
  auto y = successor(i);
  return {State(x.begin(), x.end()), State(y.begin(), y.end())};
}

void Dataset::reserve(std::size_t count) {
  states_.reserve(count * dim_);
  successors_.reserve(count * dim_);
}

void Dataset::push_back(std::span<const double> state, std::span<const double> successor) {
  if (state.size() != dim_ || successor.size() != dim_) {
    fail(ErrorKind::kModelMismatch, "sample pair dimension does not match the dataset");
  }
  states_.insert(states_.end(), state.begin(), state.end());
  successors_.insert(successors_.end(), successor.begin(), successor.end());
}

Dataset Dataset::empty_like() const {
  Dataset d(dim_, scheme_, domain_, seed_);
  d.filtered_ = filtered_;
  return d;
}

namespace {

double lattice_coordinate(double lo, double hi, std::size_t k, std::size_t count) {
  if (k + 1 == count) return hi;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(count - 1);
}

std::size_t checked_product(std::span<const std::size_t> counts, std::size_t max_samples) {
  std::size_t total = 1;
  for (std::size_t c : counts) {
    if (c != 0 && total > max_samples / c) {
      fail(ErrorKind::kCapacity, "grid exceeds the configured maximum of " +
                                     std::to_string(max_samples) + " samples");
    }
    total *= c;
  }
  if (total > max_samples) {
    fail(ErrorKind::kCapacity, "grid of " + std::to_string(total) +
                                   " samples exceeds the configured maximum of " +
                                   std::to_string(max_samples));
  }
  return total;
}

// Decodes a flat lattice index into per-axis coordinates (axis 0 slowest).
void lattice_point(const RegionBox& box, std::span<const std::size_t> counts, std::size_t index,
                   std::span<double> out) {
  for (std::size_t a = counts.size(); a-- > 0;) {
    const std::size_t k = index % counts[a];
    index /= counts[a];
    out[a] = lattice_coordinate(box.lower()[a], box.upper()[a], k, counts[a]);
  }
}

}  // namespace

std::vector<double> grid_states(const RegionBox& box, std::span<const std::size_t> counts) {
  if (counts.size() != box.dimension()) {
    fail(ErrorKind::kModelMismatch, "grid counts do not match the box dimension");
  }
  for (std::size_t c : counts) {
    if (c < 2) fail(ErrorKind::kInvalidArgument, "grid needs at least 2 points per axis");
  }
  const std::size_t total = checked_product(counts, kDefaultMaxSamples);
  const std::size_t n = box.dimension();
  std::vector<double> out(total * n);
  for (std::size_t i = 0; i < total; ++i) {
    lattice_point(box, counts, i, std::span<double>(out.data() + i * n, n));
  }
  return out;
}

Dataset sample_grid(const SystemModel& model, const RegionBox& domain,
                    std::span<const std::size_t> count_per_axis, std::size_t max_samples) {
  if (model.dimension() != domain.dimension()) {
    fail(ErrorKind::kModelMismatch, "model and domain dimensions differ");
  }
  if (count_per_axis.size() != domain.dimension()) {
    fail(ErrorKind::kInvalidArgument, "need one grid count per axis");
  }
  for (std::size_t c : count_per_axis) {
    if (c < 2) fail(ErrorKind::kInvalidArgument, "grid needs at least 2 points per axis");
  }
  const std::size_t total = checked_product(count_per_axis, max_samples);
  Dataset dataset(domain.dimension(), SamplingScheme::kUniformGrid, domain);
  dataset.reserve(total);
  State x(domain.dimension());
  for (std::size_t i = 0; i < total; ++i) {
    lattice_point(domain, count_per_axis, i, x);
    dataset.push_back(x, model.step(x));
  }
  return dataset;
}

Dataset sample_iid(const SystemModel& model, const RegionBox& domain, std::size_t count,
                   std::uint64_t seed) {
  if (model.dimension() != domain.dimension()) {
    fail(ErrorKind::kModelMismatch, "model and domain dimensions differ");
  }
  if (count == 0) fail(ErrorKind::kInvalidArgument, "sample count must be positive");
  Dataset dataset(domain.dimension(), SamplingScheme::kIidUniform, domain, seed);
  dataset.reserve(count);
  Rng rng(seed);
  State x(domain.dimension());
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t a = 0; a < x.size(); ++a) {
      x[a] = rng.uniform(domain.lower()[a], domain.upper()[a]);
    }
    dataset.push_back(x, model.step(x));
  }
  return dataset;
}

namespace {

void require_cover_input(std::span<const double> states, const RegionBox& domain) {
  const std::size_t n = domain.dimension();
  if (states.empty()) fail(ErrorKind::kNoCover, "covering radius needs at least one state");
  if (states.size() % n != 0) {
    fail(ErrorKind::kModelMismatch, "state array is not a multiple of the domain dimension");
  }
  for (std::size_t i = 0; i < states.size(); i += n) {
    if (!domain.contains(states.subspan(i, n))) {
      fail(ErrorKind::kRegionViolation,
           "state " + std::to_string(i / n) + " lies outside the covering domain");
    }
  }
}

// Minimal static kd-tree for nearest-neighbour distance queries.
class KdTree {
 public:
  KdTree(std::span<const double> points, std::size_t dim)
      : points_(points), dim_(dim), index_(points.size() / dim) {
    std::iota(index_.begin(), index_.end(), std::size_t{0});
    build(0, index_.size(), 0);
  }

  double nearest_squared(std::span<const double> query) const {
    double best = std::numeric_limits<double>::infinity();
    search(0, index_.size(), 0, query, best);
    return best;
  }

 private:
  double coord(std::size_t p, std::size_t axis) const { return points_[index_[p] * dim_ + axis]; }

  void build(std::size_t lo, std::size_t hi, std::size_t depth) {
    if (hi - lo <= 1) return;
    const std::size_t axis = depth % dim_;
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(index_.begin() + lo, index_.begin() + mid, index_.begin() + hi,
                     [&](std::size_t a, std::size_t b) {
                       return points_[a * dim_ + axis] < points_[b * dim_ + axis];
                     });
    build(lo, mid, depth + 1);
    build(mid + 1, hi, depth + 1);
  }

  void search(std::size_t lo, std::size_t hi, std::size_t depth, std::span<const double> q,
              double& best) const {
    if (lo >= hi) return;
    const std::size_t axis = depth % dim_;
    const std::size_t mid = lo + (hi - lo) / 2;
    double d2 = 0.0;
    for (std::size_t a = 0; a < dim_; ++a) {
      const double diff = coord(mid, a) - q[a];
      d2 += diff * diff;
    }
    best = std::min(best, d2);
    const double split = q[axis] - coord(mid, axis);
    const bool left_first = split < 0.0;
    if (left_first) {
      search(lo, mid, depth + 1, q, best);
      if (split * split < best) search(mid + 1, hi, depth + 1, q, best);
    } else {
      search(mid + 1, hi, depth + 1, q, best);
      if (split * split < best) search(lo, mid, depth + 1, q, best);
    }
  }

  std::span<const double> points_;
  std::size_t dim_;
  std::vector<std::size_t> index_;
};

}  // namespace

double covering_radius_lattice(std::span<const double> states, const RegionBox& domain,
                               std::size_t reference_resolution) {
  require_cover_input(states, domain);
  if (reference_resolution < 2) {
    fail(ErrorKind::kInvalidArgument, "reference resolution must be at least 2");
  }
  const std::size_t n = domain.dimension();
  const KdTree tree(states, n);
  const std::vector<std::size_t> counts(n, reference_resolution);
  const std::size_t total = checked_product(counts, std::numeric_limits<std::size_t>::max());
  State p(n);
  double worst = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    lattice_point(domain, counts, i, p);
    worst = std::max(worst, tree.nearest_squared(p));
  }
  return std::sqrt(worst);
}

double covering_radius(std::span<const double> states, const RegionBox& domain,
                       std::size_t reference_resolution) {
  require_cover_input(states, domain);
  const std::size_t n = domain.dimension();
  if (n == 1) {
    std::vector<double> sorted(states.begin(), states.end());
    std::sort(sorted.begin(), sorted.end());
    double radius = std::max(sorted.front() - domain.lower()[0], domain.upper()[0] - sorted.back());
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      radius = std::max(radius, 0.5 * (sorted[i] - sorted[i - 1]));
    }
    return radius;
  }
  if (reference_resolution == 0) {
    const double per_axis = std::pow(static_cast<double>(states.size() / n), 1.0 / n);
    reference_resolution = std::max<std::size_t>(2, static_cast<std::size_t>(10.0 * std::ceil(per_axis)));
  }
  return covering_radius_lattice(states, domain, reference_resolution);
}

std::string format_double(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  p += ".json";
  return p;
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  std::ofstream csv(path);
  if (!csv) fail(ErrorKind::kFile, "cannot write " + path.string());
  const std::size_t n = dataset.dimension();
  for (std::size_t a = 0; a < n; ++a) csv << (a ? "," : "") << "x_" << a + 1;
  for (std::size_t a = 0; a < n; ++a) csv << ",y_" << a + 1;
  csv << '\n';
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    auto x = dataset.state(i);
    auto y = dataset.successor(i);
    for (std::size_t a = 0; a < n; ++a) csv << (a ? "," : "") << format_double(x[a]);
    for (std::size_t a = 0; a < n; ++a) csv << ',' << format_double(y[a]);
    csv << '\n';
  }
  if (!csv) fail(ErrorKind::kFile, "failed writing " + path.string());

  nlohmann::json meta;
  meta["scheme"] = to_string(dataset.scheme());
  meta["seed"] = dataset.seed() ? nlohmann::json(*dataset.seed()) : nlohmann::json(nullptr);
  meta["domain"] = {{"lower", dataset.domain().lower()}, {"upper", dataset.domain().upper()}};
  meta["count"] = dataset.size();
  meta["dimension"] = n;
  meta["filtered"] = dataset.filtered();
  std::ofstream side(sidecar_path(path));
  if (!side) fail(ErrorKind::kFile, "cannot write " + sidecar_path(path).string());
  side << meta.dump(2) << '\n';
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(',', start);
    out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_field(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double value = 0.0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": cannot parse number '" +
                                std::string(field) + "'");
  }
  return value;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream side(sidecar_path(path));
  if (!side) fail(ErrorKind::kFile, "missing dataset sidecar " + sidecar_path(path).string());
  nlohmann::json meta;
  try {
    side >> meta;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, sidecar_path(path).string() + ": " + e.what());
  }
  std::optional<Dataset> dataset;
  std::size_t expected_count = 0;
  try {
    RegionBox domain(meta.at("domain").at("lower").get<std::vector<double>>(),
                     meta.at("domain").at("upper").get<std::vector<double>>());
    std::optional<std::uint64_t> seed;
    if (!meta.at("seed").is_null()) seed = meta.at("seed").get<std::uint64_t>();
    dataset.emplace(domain.dimension(),
                    sampling_scheme_from_string(meta.at("scheme").get<std::string>()), domain, seed);
    dataset->set_filtered(meta.value("filtered", false));
    expected_count = meta.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kParse, sidecar_path(path).string() + ": " + e.what());
  }

  std::ifstream csv(path);
  if (!csv) fail(ErrorKind::kFile, "cannot read " + path.string());
  const std::size_t n = dataset->dimension();
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(csv, line)) fail(ErrorKind::kParse, "line 1: missing header row");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string expected_header;
  for (std::size_t a = 0; a < n; ++a) expected_header += (a ? ",x_" : "x_") + std::to_string(a + 1);
  for (std::size_t a = 0; a < n; ++a) expected_header += ",y_" + std::to_string(a + 1);
  if (line != expected_header) {
    fail(ErrorKind::kParse, "line 1: expected header '" + expected_header + "', got '" + line + "'");
  }
  dataset->reserve(expected_count);
  State x(n), y(n);
  while (std::getline(csv, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = split_commas(line);
    if (fields.size() != 2 * n) {
      fail(ErrorKind::kParse, "line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(2 * n) + " columns, found " +
                                  std::to_string(fields.size()));
    }
    for (std::size_t a = 0; a < n; ++a) {
      x[a] = parse_field(fields[a], line_no);
      y[a] = parse_field(fields[n + a], line_no);
    }
    dataset->push_back(x, y);
  }
  if (dataset->size() != expected_count) {
    fail(ErrorKind::kParse, path.string() + ": sidecar declares " + std::to_string(expected_count) +
                                " pairs, file holds " + std::to_string(dataset->size()));
  }
  return std::move(*dataset);
}

std::string dataset_hash(const Dataset& dataset) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](const std::vector<double>& values) {
    for (double v : values) {
      const auto* bytes = reinterpret_cast<const unsigned char*>(&v);
      for (std::size_t b = 0; b < sizeof(double); ++b) {
        h ^= bytes[b];
        h *= 0x100000001b3ULL;
      }
    }
  };
  mix(dataset.states());
  mix(dataset.successors());
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace physbc
