#include <doctest.h>

#include <algorithm>
#include <queue>
#include <set>

#include "spinkick/lattice.hpp"

using namespace spinkick;

namespace {

// exhaustive matching check, independent of validate()
void check_layers_are_matchings(const LatticeSpec& spec) {
  for (Layer layer : {Layer::R, Layer::G, Layer::B}) {
    std::set<int> touched;
    for (const Bond& b : spec.bonds_in_layer(layer)) {
      CHECK(touched.insert(b.a).second);
      CHECK(touched.insert(b.b).second);
    }
  }
}

}  // namespace

TEST_CASE("folded chain without rungs is an alternating path") {
  const LatticeSpec spec = build_folded_chain(28, {}, RungStyle::DirectBond, 0);
  CHECK(spec.num_sites == 28);
  CHECK(spec.bonds.size() == 27);
  CHECK(spec.rung_bonds().empty());
  CHECK(spec.bonds_in_layer(Layer::R).size() == 14);
  CHECK(spec.bonds_in_layer(Layer::G).size() == 13);
  CHECK(spec.bonds_in_layer(Layer::B).empty());
  CHECK(validate(spec).empty());
  check_layers_are_matchings(spec);
}

TEST_CASE("4-site path splits even and odd bonds into two layers") {
  const LatticeSpec spec = build_folded_chain(4, {}, RungStyle::DirectBond, 0);
  REQUIRE(spec.bonds.size() == 3);
  CHECK(spec.bonds[0].a == 0);
  CHECK(spec.bonds[0].b == 1);
  CHECK(spec.bonds[0].layer == spec.bonds[2].layer);  // (0,1) and (2,3) together
  CHECK(spec.bonds[1].layer != spec.bonds[0].layer);  // (1,2) alone
}

TEST_CASE("single direct rung on a 20-site chain") {
  const LatticeSpec spec = build_folded_chain(20, {{4, 15}}, RungStyle::DirectBond, 0);
  CHECK(spec.num_sites == 20);
  REQUIRE(spec.rung_bonds().size() == 1);
  CHECK(spec.rung_bonds()[0].layer == Layer::B);
  CHECK(validate(spec).empty());
  check_layers_are_matchings(spec);
}

TEST_CASE("midsite rung inserts one extra site and two rung bonds") {
  const LatticeSpec spec = build_folded_chain(19, {{4, 14}}, RungStyle::MidSite, 0);
  CHECK(spec.num_sites == 20);  // the hardware-style 20-qubit layout
  CHECK(spec.rung_bonds().size() == 2);
  CHECK(validate(spec).empty());
  check_layers_are_matchings(spec);
}

TEST_CASE("29-qubit two-rung layouts are constructible both ways") {
  const LatticeSpec direct = build_folded_chain(29, {{5, 23}, {9, 19}}, RungStyle::DirectBond, 0);
  CHECK(direct.num_sites == 29);
  CHECK(validate(direct).empty());

  const LatticeSpec mid = build_folded_chain(27, {{5, 21}, {9, 17}}, RungStyle::MidSite, 0);
  CHECK(mid.num_sites == 29);
  CHECK(mid.rung_bonds().size() == 4);
  CHECK(validate(mid).empty());
  check_layers_are_matchings(mid);
}

TEST_CASE("folded chain rejects bad attachments") {
  CHECK_THROWS_AS(build_folded_chain(3, {}, RungStyle::DirectBond, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_folded_chain(10, {{2, 3}}, RungStyle::DirectBond, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_folded_chain(10, {{2, 2}}, RungStyle::DirectBond, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_folded_chain(10, {{0, 12}}, RungStyle::DirectBond, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_folded_chain(10, {{2, 6}, {6, 9}}, RungStyle::DirectBond, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(build_folded_chain(10, {}, RungStyle::DirectBond, 10), std::invalid_argument);
}

TEST_CASE("scattering geometry: sizes and partition") {
  SUBCASE("paper-scale count") {
    const LatticeSpec spec = build_scattering_geometry(22, 11, 11);
    CHECK(spec.num_sites == 45);
    CHECK(validate(spec).empty());
  }
  SUBCASE("reduced size partition sums to n") {
    const LatticeSpec spec = build_scattering_geometry(8, 4, 4);
    CHECK(spec.num_sites == 17);
    REQUIRE(spec.site_partition.has_value());
    CHECK(spec.site_partition->size() == 17);
  }
}

TEST_CASE("scattering partition agrees with breadth-first labeling from the probe") {
  const int chain_len = 8, attach_1 = 4, attach_2 = 3;
  const LatticeSpec spec = build_scattering_geometry(chain_len, attach_1, attach_2);
  REQUIRE(spec.site_partition.has_value());
  const auto& part = *spec.site_partition;

  // oracle: BFS from the probe over chain bonds only; chain-1 sites at
  // distance <= dist(attach_1) are on the probe side of the rung.
  std::vector<std::vector<int>> adj(spec.num_sites);
  for (const Bond& b : spec.bonds)
    if (b.kind == BondKind::Chain) {
      adj[b.a].push_back(b.b);
      adj[b.b].push_back(b.a);
    }
  std::vector<int> dist(spec.num_sites, -1);
  std::queue<int> q;
  dist[spec.probe] = 0;
  q.push(spec.probe);
  while (!q.empty()) {
    const int s = q.front();
    q.pop();
    for (int t : adj[s])
      if (dist[t] < 0) {
        dist[t] = dist[s] + 1;
        q.push(t);
      }
  }

  int before = 0;
  for (int s = 0; s < spec.num_sites; ++s) {
    if (dist[s] >= 0 && dist[s] <= dist[attach_1]) {
      CHECK(part[s] == Region::BeforeRung);
      ++before;
    } else if (dist[s] > dist[attach_1]) {
      CHECK(part[s] == Region::AfterRungSameChain);
    } else if (s == spec.num_sites - 1) {
      CHECK(part[s] == Region::RungSite);
    } else {
      CHECK(part[s] == Region::OtherChain);
    }
  }
  CHECK(before == 5);  // sites 0..4 inclusive of the attachment
  check_layers_are_matchings(spec);
}

TEST_CASE("scattering geometry rejects invalid attachments") {
  CHECK_THROWS_AS(build_scattering_geometry(8, 8, 4), std::invalid_argument);
  CHECK_THROWS_AS(build_scattering_geometry(8, -1, 4), std::invalid_argument);
}

TEST_CASE("validate reports constructed violations") {
  LatticeSpec spec = build_folded_chain(6, {}, RungStyle::DirectBond, 0);

  SUBCASE("clean spec has no violations") { CHECK(validate(spec).empty()); }

  SUBCASE("two same-layer bonds sharing a site") {
    spec.bonds.push_back({3, 5, spec.bonds[1].layer, BondKind::Rung});
    // bond (1,2) or (3,4) shares site 3 in that layer now
    spec.bonds.push_back({1, 3, spec.bonds[1].layer, BondKind::Rung});
    const auto violations = validate(spec);
    bool found = false;
    for (const auto& v : violations)
      if (v.find("not a matching at site 3") != std::string::npos) found = true;
    CHECK(found);
  }

  SUBCASE("disconnected chain bonds") {
    spec.bonds.erase(spec.bonds.begin() + 1);  // drop (2,3); chain splits
    const auto violations = validate(spec);
    bool found = false;
    for (const auto& v : violations)
      if (v.find("chain bonds not a path") != std::string::npos) found = true;
    CHECK(found);
  }

  SUBCASE("duplicate bond") {
    spec.bonds.push_back(spec.bonds.front());
    const auto violations = validate(spec);
    bool found = false;
    for (const auto& v : violations)
      if (v.find("duplicate bond") != std::string::npos) found = true;
    CHECK(found);
  }
}

TEST_CASE("every generated lattice validates over a parameter sweep") {
  for (int len : {4, 5, 8, 13, 20}) {
    CHECK(validate(build_folded_chain(len, {}, RungStyle::DirectBond, len / 2)).empty());
    if (len >= 8) {
      CHECK(validate(build_folded_chain(len, {{2, len - 3}}, RungStyle::DirectBond, 0)).empty());
      CHECK(validate(build_folded_chain(len, {{2, len - 3}}, RungStyle::MidSite, 0)).empty());
    }
  }
  for (int len : {4, 6, 8, 11})
    for (int attach : {0, len / 2, len - 1})
      CHECK(validate(build_scattering_geometry(len, attach, len / 2)).empty());
}

TEST_CASE("lattice JSON round trip") {
  const LatticeSpec spec = build_scattering_geometry(6, 3, 2);
  const LatticeSpec back = lattice_from_json_string(to_json_string(spec));
  CHECK(back.num_sites == spec.num_sites);
  CHECK(back.probe == spec.probe);
  REQUIRE(back.bonds.size() == spec.bonds.size());
  for (std::size_t i = 0; i < spec.bonds.size(); ++i) {
    CHECK(back.bonds[i].a == spec.bonds[i].a);
    CHECK(back.bonds[i].b == spec.bonds[i].b);
    CHECK(back.bonds[i].layer == spec.bonds[i].layer);
    CHECK(back.bonds[i].kind == spec.bonds[i].kind);
  }
  REQUIRE(back.site_partition.has_value());
  CHECK(*back.site_partition == *spec.site_partition);
  CHECK(validate(back).empty());
}

TEST_CASE("bond_distances is a plain BFS metric") {
  const LatticeSpec spec = build_folded_chain(10, {{2, 7}}, RungStyle::DirectBond, 0);
  const auto dist = bond_distances(spec, 0);
  CHECK(dist[0] == 0);
  CHECK(dist[2] == 2);
  CHECK(dist[7] == 3);  // shortcut through the rung
}
