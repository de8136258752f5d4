#include "spinkick/lattice.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace spinkick {

namespace {

using nlohmann::json;

const std::array<Layer, 3> kLayers = {Layer::R, Layer::G, Layer::B};

std::string region_name(Region r) {
  switch (r) {
    case Region::BeforeRung: return "before_rung";
    case Region::AfterRungSameChain: return "after_rung_same_chain";
    case Region::OtherChain: return "other_chain";
    case Region::RungSite: return "rung_site";
  }
  return "?";
}

Region region_from_name(const std::string& s) {
  if (s == "before_rung") return Region::BeforeRung;
  if (s == "after_rung_same_chain") return Region::AfterRungSameChain;
  if (s == "other_chain") return Region::OtherChain;
  if (s == "rung_site") return Region::RungSite;
  throw std::invalid_argument("unknown region name: " + s);
}

Layer layer_from_name(const std::string& s) {
  if (s == "R") return Layer::R;
  if (s == "G") return Layer::G;
  if (s == "B") return Layer::B;
  throw std::invalid_argument("unknown layer name: " + s);
}

// Assigns layers so that each layer is a matching, preferring each bond's
// existing layer and deviating only where attachments force it. Deterministic
// depth-first search over bonds in their stored order.
bool assign_layers(std::vector<Bond>& bonds) {
  int max_site = 0;
  for (const Bond& b : bonds) max_site = std::max({max_site, b.a, b.b});
  // used[site][layer]
  std::vector<std::array<bool, 3>> used(max_site + 1, {false, false, false});

  auto fits = [&](const Bond& b, int layer) {
    return !used[b.a][layer] && !used[b.b][layer];
  };

  // candidate order per bond: its preferred layer first, then R, G, B
  std::vector<std::array<int, 3>> candidates(bonds.size());
  for (size_t i = 0; i < bonds.size(); ++i) {
    const int pref = static_cast<int>(bonds[i].layer);
    int k = 0;
    candidates[i][k++] = pref;
    for (int layer = 0; layer < 3; ++layer)
      if (layer != pref) candidates[i][k++] = layer;
  }

  std::vector<int> choice(bonds.size(), -1);
  size_t i = 0;
  while (i < bonds.size()) {
    Bond& b = bonds[i];
    bool placed = false;
    for (int attempt = choice[i] + 1; attempt < 3 && !placed; ++attempt) {
      const int layer = candidates[i][attempt];
      if (!fits(b, layer)) continue;
      choice[i] = attempt;
      used[b.a][layer] = used[b.b][layer] = true;
      b.layer = static_cast<Layer>(layer);
      placed = true;
    }
    if (placed) {
      ++i;
      continue;
    }
    // backtrack
    choice[i] = -1;
    if (i == 0) return false;
    --i;
    const int prev_layer = static_cast<int>(bonds[i].layer);
    used[bonds[i].a][prev_layer] = used[bonds[i].b][prev_layer] = false;
  }
  return true;
}

std::vector<Bond> alternating_chain_bonds(int first_site, int len) {
  std::vector<Bond> out;
  out.reserve(len - 1);
  for (int i = 0; i + 1 < len; ++i) {
    Bond b;
    b.a = first_site + i;
    b.b = first_site + i + 1;
    b.layer = (i % 2 == 0) ? Layer::R : Layer::G;
    b.kind = BondKind::Chain;
    out.push_back(b);
  }
  return out;
}

}  // namespace

char layer_name(Layer layer) {
  switch (layer) {
    case Layer::R: return 'R';
    case Layer::G: return 'G';
    case Layer::B: return 'B';
  }
  return '?';
}

std::vector<Bond> LatticeSpec::bonds_in_layer(Layer layer) const {
  std::vector<Bond> out;
  for (const Bond& b : bonds)
    if (b.layer == layer) out.push_back(b);
  return out;
}

std::vector<Bond> LatticeSpec::rung_bonds() const {
  std::vector<Bond> out;
  for (const Bond& b : bonds)
    if (b.kind == BondKind::Rung) out.push_back(b);
  return out;
}

LatticeSpec build_folded_chain(int chain_len,
                               const std::vector<std::pair<int, int>>& rung_attachments,
                               RungStyle rung_style, int probe) {
  if (chain_len < 4) throw std::invalid_argument("chain_len must be >= 4");

  std::set<int> attachment_sites;
  for (const auto& [a, b] : rung_attachments) {
    if (a < 0 || a >= chain_len || b < 0 || b >= chain_len)
      throw std::invalid_argument("rung attachment site out of range");
    if (std::abs(a - b) <= 1)
      throw std::invalid_argument("rung attachment sites must be distinct and not adjacent on the chain");
    if (!attachment_sites.insert(a).second || !attachment_sites.insert(b).second)
      throw std::invalid_argument("rung attachment sites must be distinct");
  }

  LatticeSpec spec;
  spec.bonds = alternating_chain_bonds(0, chain_len);
  spec.num_sites = chain_len;

  for (const auto& [a, b] : rung_attachments) {
    if (rung_style == RungStyle::DirectBond) {
      spec.bonds.push_back({a, b, Layer::B, BondKind::Rung});
    } else {
      const int mid = spec.num_sites++;
      spec.bonds.push_back({a, mid, Layer::B, BondKind::Rung});
      spec.bonds.push_back({mid, b, Layer::B, BondKind::Rung});
    }
  }

  if (!assign_layers(spec.bonds))
    throw std::invalid_argument("no valid 3-matching layer assignment exists for the requested rungs");

  if (probe < 0 || probe >= spec.num_sites) throw std::invalid_argument("probe site out of range");
  spec.probe = probe;
  return spec;
}

LatticeSpec build_scattering_geometry(int chain_len, int attach_1, int attach_2) {
  if (chain_len < 2) throw std::invalid_argument("chain_len must be >= 2");
  if (attach_1 < 0 || attach_1 >= chain_len || attach_2 < 0 || attach_2 >= chain_len)
    throw std::invalid_argument("attachment index out of range");

  LatticeSpec spec;
  spec.num_sites = 2 * chain_len + 1;
  const int rung_site = 2 * chain_len;

  spec.bonds = alternating_chain_bonds(0, chain_len);
  auto chain2 = alternating_chain_bonds(chain_len, chain_len);
  spec.bonds.insert(spec.bonds.end(), chain2.begin(), chain2.end());
  spec.bonds.push_back({attach_1, rung_site, Layer::B, BondKind::Rung});
  spec.bonds.push_back({rung_site, chain_len + attach_2, Layer::B, BondKind::Rung});

  if (!assign_layers(spec.bonds))
    throw std::invalid_argument("no valid 3-matching layer assignment exists for the scattering geometry");

  spec.probe = 0;
  std::vector<Region> partition(spec.num_sites);
  for (int i = 0; i < chain_len; ++i)
    partition[i] = i <= attach_1 ? Region::BeforeRung : Region::AfterRungSameChain;
  for (int i = chain_len; i < 2 * chain_len; ++i) partition[i] = Region::OtherChain;
  partition[rung_site] = Region::RungSite;
  spec.site_partition = std::move(partition);
  return spec;
}

std::vector<std::string> validate(const LatticeSpec& spec) {
  std::vector<std::string> violations;
  if (spec.num_sites < 2) violations.push_back("fewer than 2 sites");
  if (spec.probe < 0 || spec.probe >= spec.num_sites)
    violations.push_back("probe site " + std::to_string(spec.probe) + " out of range");

  std::set<std::pair<int, int>> seen;
  for (const Bond& b : spec.bonds) {
    if (b.a == b.b) violations.push_back("bond (" + std::to_string(b.a) + "," + std::to_string(b.b) + ") is a self-loop");
    if (b.a < 0 || b.a >= spec.num_sites || b.b < 0 || b.b >= spec.num_sites) {
      violations.push_back("bond (" + std::to_string(b.a) + "," + std::to_string(b.b) + ") out of range");
      continue;
    }
    auto key = std::minmax(b.a, b.b);
    if (!seen.insert(key).second)
      violations.push_back("duplicate bond (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")");
  }

  // each layer must be a matching
  for (Layer layer : kLayers) {
    std::set<int> touched;
    for (const Bond& b : spec.bonds) {
      if (b.layer != layer) continue;
      for (int s : {b.a, b.b}) {
        if (s < 0 || s >= spec.num_sites) continue;
        if (!touched.insert(s).second)
          violations.push_back(std::string("layer ") + layer_name(layer) + " not a matching at site " +
                               std::to_string(s));
      }
    }
  }

  // Chain bonds must form simple paths: one path for a plain lattice, two
  // when a site partition marks the two-chain scattering setup.
  std::vector<std::vector<int>> adj(spec.num_sites);
  std::set<int> chain_sites;
  int chain_bond_count = 0;
  for (const Bond& b : spec.bonds) {
    if (b.kind != BondKind::Chain) continue;
    if (b.a < 0 || b.a >= spec.num_sites || b.b < 0 || b.b >= spec.num_sites || b.a == b.b) continue;
    adj[b.a].push_back(b.b);
    adj[b.b].push_back(b.a);
    chain_sites.insert(b.a);
    chain_sites.insert(b.b);
    ++chain_bond_count;
  }
  if (chain_bond_count > 0) {
    bool path = true;
    for (int s : chain_sites)
      if (adj[s].size() > 2) path = false;
    int components = 0;
    std::set<int> visited;
    for (int start : chain_sites) {
      if (visited.count(start)) continue;
      ++components;
      std::queue<int> bfs;
      bfs.push(start);
      visited.insert(start);
      while (!bfs.empty()) {
        int s = bfs.front();
        bfs.pop();
        for (int t : adj[s])
          if (visited.insert(t).second) bfs.push(t);
      }
    }
    // acyclic forest of paths: edges == sites - components
    if (chain_bond_count != static_cast<int>(chain_sites.size()) - components) path = false;
    const int expected_components = spec.site_partition ? 2 : 1;
    if (components != expected_components) path = false;
    if (!path) violations.push_back("chain bonds not a path");
  }

  if (spec.site_partition && static_cast<int>(spec.site_partition->size()) != spec.num_sites)
    violations.push_back("site partition size does not match site count");

  return violations;
}

std::vector<int> bond_distances(const LatticeSpec& spec, int from) {
  std::vector<int> dist(spec.num_sites, -1);
  std::vector<std::vector<int>> adj(spec.num_sites);
  for (const Bond& b : spec.bonds) {
    adj[b.a].push_back(b.b);
    adj[b.b].push_back(b.a);
  }
  std::queue<int> q;
  dist[from] = 0;
  q.push(from);
  while (!q.empty()) {
    int s = q.front();
    q.pop();
    for (int t : adj[s])
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        q.push(t);
      }
  }
  return dist;
}

std::string to_json_string(const LatticeSpec& spec) {
  json j;
  j["sites"] = spec.num_sites;
  j["probe"] = spec.probe;
  j["bonds"] = json::array();
  for (const Bond& b : spec.bonds) {
    j["bonds"].push_back({{"a", b.a},
                          {"b", b.b},
                          {"layer", std::string(1, layer_name(b.layer))},
                          {"kind", b.kind == BondKind::Chain ? "chain" : "rung"}});
  }
  if (spec.site_partition) {
    json p = json::array();
    for (Region r : *spec.site_partition) p.push_back(region_name(r));
    j["partition"] = std::move(p);
  }
  return j.dump(2);
}

LatticeSpec lattice_from_json_string(const std::string& text) {
  json j = json::parse(text);
  LatticeSpec spec;
  spec.num_sites = j.at("sites").get<int>();
  spec.probe = j.at("probe").get<int>();
  for (const auto& jb : j.at("bonds")) {
    Bond b;
    b.a = jb.at("a").get<int>();
    b.b = jb.at("b").get<int>();
    b.layer = layer_from_name(jb.at("layer").get<std::string>());
    const std::string kind = jb.at("kind").get<std::string>();
    if (kind != "chain" && kind != "rung") throw std::invalid_argument("unknown bond kind: " + kind);
    b.kind = kind == "chain" ? BondKind::Chain : BondKind::Rung;
    spec.bonds.push_back(b);
  }
  if (j.contains("partition")) {
    std::vector<Region> partition;
    for (const auto& jp : j.at("partition")) partition.push_back(region_from_name(jp.get<std::string>()));
    spec.site_partition = std::move(partition);
  }
  return spec;
}

}  // namespace spinkick
