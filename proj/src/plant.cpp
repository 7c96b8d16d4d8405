#include "osn/plant.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace osn {

double AttributePlantSpec::pa_of_degree(std::uint32_t k) const {
  const double x = pa_base + pa_log_slope * std::log10(std::max<std::uint32_t>(k, 1));
  return std::clamp(x, 0.0, pa_cap);
}

namespace {

std::vector<std::uint32_t> draw_distinct_ids(std::size_t n, std::uint64_t id_space,
                                             Rng& rng) {
  std::unordered_set<std::uint32_t> seen;
  seen.reserve(n * 2);
  std::vector<std::uint32_t> ids;
  ids.reserve(n);
  while (ids.size() < n) {
    const auto id = static_cast<std::uint32_t>(1 + rng.index(id_space));
    if (seen.insert(id).second) ids.push_back(id);
  }
  return ids;
}

}  // namespace

GroundTruth plant_attributes(SocialGraph& g, const AttributePlantSpec& spec,
                             std::uint64_t seed) {
  const std::size_t n = g.node_count();
  if (n == 0) throw Error("plant_attributes: empty graph");
  double region_sum = 0.0;
  for (double f : spec.region_fractions) {
    if (f < 0.0) throw Error("plant_attributes: negative region fraction");
    region_sum += f;
  }
  if (region_sum > 1.0 + 1e-12) {
    throw Error("plant_attributes: region fractions must sum to <= 1");
  }
  if (spec.id_space < n) throw Error("plant_attributes: id space smaller than graph");
  if (spec.invalid_share < 0.0 || spec.invalid_share > 1.0) {
    throw Error("plant_attributes: invalid_share must lie in [0,1]");
  }

  Rng rng(seed);
  std::vector<NodeAttributes> attrs(n);

  // User ids. Dense occupancy of a sparse space: draw distinct ids, then
  // either scatter them uniformly or rank-match them against degree so that
  // high-degree nodes get the low (old) ids.
  Rng id_rng = rng.stream(1);
  std::vector<std::uint32_t> ids = draw_distinct_ids(n, spec.id_space, id_rng);
  if (spec.id_mode == IdMode::kUniformSparse) {
    for (NodeId v = 0; v < n; ++v) attrs[v].user_id = ids[v];
  } else {
    std::sort(ids.begin(), ids.end());
    std::vector<NodeId> order(n);
    for (NodeId v = 0; v < n; ++v) order[v] = v;
    id_rng.shuffle(order);  // random tie-break before the stable degree sort
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
      return g.degree(a) > g.degree(b);
    });
    for (std::size_t i = 0; i < n; ++i) attrs[order[i]].user_id = ids[i];
  }

  // Regions: independent categorical draw per node.
  Rng region_rng = rng.stream(2);
  const auto region_count = static_cast<std::uint16_t>(spec.region_fractions.size());
  for (NodeId v = 0; v < n; ++v) {
    double u = region_rng.real();
    std::uint16_t r = 0;
    for (std::size_t i = 0; i < spec.region_fractions.size(); ++i) {
      if (u < spec.region_fractions[i]) {
        r = static_cast<std::uint16_t>(i + 1);
        break;
      }
      u -= spec.region_fractions[i];
    }
    attrs[v].region_id = r;
  }

  // Privacy.
  Rng privacy_rng = rng.stream(3);
  for (NodeId v = 0; v < n; ++v) {
    PrivacySettings q;
    if (privacy_rng.bernoulli(spec.pa_of_degree(g.degree(v)))) {
      q.bits = privacy_rng.bernoulli(spec.invalid_share)
                   ? std::uint8_t{0b1101}   // hide friends: invalid for crawls
                   : std::uint8_t{0b1011};  // hide photo: still crawlable
    }
    attrs[v].privacy = q;
  }

  // Realized ground truth.
  GroundTruth truth;
  truth.seed = seed;
  truth.id_mode = spec.id_mode;
  truth.id_space = spec.id_space;
  truth.pa_base = spec.pa_base;
  truth.pa_log_slope = spec.pa_log_slope;
  truth.pa_cap = spec.pa_cap;
  truth.invalid_share = spec.invalid_share;
  truth.node_count = n;
  truth.planted_region_fractions.assign(region_count + 1, 0.0);
  truth.planted_region_fractions[0] = 1.0 - region_sum;
  for (std::size_t i = 0; i < spec.region_fractions.size(); ++i) {
    truth.planted_region_fractions[i + 1] = spec.region_fractions[i];
  }
  truth.realized_region_fractions.assign(region_count + 1, 0.0);
  std::map<std::uint32_t, GroundTruth::DegreeRow> rows;
  std::uint64_t aware = 0, invalid = 0, valid_aware = 0, valid_nodes = 0;
  for (NodeId v = 0; v < n; ++v) {
    truth.realized_region_fractions[attrs[v].region_id] += 1.0;
    auto& row = rows[g.degree(v)];
    row.degree = g.degree(v);
    ++row.nodes;
    const bool node_aware = !attrs[v].privacy.is_default();
    const bool node_invalid = !attrs[v].privacy.view_friends();
    if (node_aware) {
      ++row.aware;
      ++aware;
    }
    if (node_invalid) {
      ++row.invalid;
      ++invalid;
    } else {
      ++valid_nodes;
      if (node_aware) ++valid_aware;
    }
  }
  for (auto& f : truth.realized_region_fractions) f /= static_cast<double>(n);
  truth.pa_by_degree.reserve(rows.size());
  for (const auto& [k, row] : rows) truth.pa_by_degree.push_back(row);
  truth.realized_global_pa = static_cast<double>(aware) / static_cast<double>(n);
  truth.realized_invalid_fraction =
      static_cast<double>(invalid) / static_cast<double>(n);
  truth.realized_valid_pa =
      valid_nodes == 0 ? 0.0
                       : static_cast<double>(valid_aware) /
                             static_cast<double>(valid_nodes);

  g.set_attributes(std::move(attrs));
  g.set_id_space(spec.id_space);
  g.set_region_count(region_count);
  return truth;
}

const char* to_string(IdMode m) {
  return m == IdMode::kUniformSparse ? "uniform" : "anticorrelated";
}

IdMode id_mode_from_string(const std::string& s) {
  if (s == "uniform") return IdMode::kUniformSparse;
  if (s == "anticorrelated") return IdMode::kDegreeAnticorrelated;
  throw Error("unknown id mode '" + s + "'");
}

void GroundTruth::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  save(out);
}

void GroundTruth::save(std::ostream& out) const {
  out.precision(17);
  out << "[plant]\n";
  out << "seed = " << seed << '\n';
  out << "id_mode = " << to_string(id_mode) << '\n';
  out << "id_space = " << id_space << '\n';
  out << "pa_base = " << pa_base << '\n';
  out << "pa_log_slope = " << pa_log_slope << '\n';
  out << "pa_cap = " << pa_cap << '\n';
  out << "invalid_share = " << invalid_share << '\n';
  out << "node_count = " << node_count << '\n';
  out << "global_pa = " << realized_global_pa << '\n';
  out << "valid_pa = " << realized_valid_pa << '\n';
  out << "invalid_fraction = " << realized_invalid_fraction << '\n';
  out << "\n[regions]\n";
  out << "# region planted realized\n";
  for (std::size_t r = 0; r < realized_region_fractions.size(); ++r) {
    out << r << ' ' << planted_region_fractions[r] << ' '
        << realized_region_fractions[r] << '\n';
  }
  out << "\n[pa_by_degree]\n";
  out << "# degree nodes aware invalid\n";
  for (const auto& row : pa_by_degree) {
    out << row.degree << ' ' << row.nodes << ' ' << row.aware << ' '
        << row.invalid << '\n';
  }
}

GroundTruth GroundTruth::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return load(in, path);
}

GroundTruth GroundTruth::load(std::istream& in, const std::string& name) {
  GroundTruth t;
  t.planted_region_fractions.clear();
  t.realized_region_fractions.clear();
  std::string line, section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fail = [&](const std::string& msg) {
      throw ParseError(name + ":" + std::to_string(line_no) + ": " + msg);
    };
    std::string s = line.substr(0, line.find('#'));
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail("malformed section header");
      section = s.substr(1, s.size() - 2);
      continue;
    }
    std::istringstream ls(s);
    if (section == "plant") {
      std::string key, eq, value;
      if (!(ls >> key >> eq >> value) || eq != "=") fail("expected 'key = value'");
      if (key == "seed") t.seed = std::stoull(value);
      else if (key == "id_mode") t.id_mode = id_mode_from_string(value);
      else if (key == "id_space") t.id_space = std::stoull(value);
      else if (key == "pa_base") t.pa_base = std::stod(value);
      else if (key == "pa_log_slope") t.pa_log_slope = std::stod(value);
      else if (key == "pa_cap") t.pa_cap = std::stod(value);
      else if (key == "invalid_share") t.invalid_share = std::stod(value);
      else if (key == "node_count") t.node_count = std::stoull(value);
      else if (key == "global_pa") t.realized_global_pa = std::stod(value);
      else if (key == "valid_pa") t.realized_valid_pa = std::stod(value);
      else if (key == "invalid_fraction") t.realized_invalid_fraction = std::stod(value);
      else fail("unknown key '" + key + "'");
    } else if (section == "regions") {
      std::size_t r = 0;
      double planted = 0, realized = 0;
      if (!(ls >> r >> planted >> realized)) fail("expected 'region planted realized'");
      if (r != t.planted_region_fractions.size()) fail("regions out of order");
      t.planted_region_fractions.push_back(planted);
      t.realized_region_fractions.push_back(realized);
    } else if (section == "pa_by_degree") {
      GroundTruth::DegreeRow row;
      if (!(ls >> row.degree >> row.nodes >> row.aware >> row.invalid)) {
        fail("expected 'degree nodes aware invalid'");
      }
      t.pa_by_degree.push_back(row);
    } else {
      fail("content outside a known section");
    }
  }
  return t;
}

}  // namespace osn
