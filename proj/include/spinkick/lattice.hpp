#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spinkick {

/// Bond layers of the kicked evolution; one Floquet step applies R, then G, then B.
enum class Layer { R, G, B };

enum class BondKind { Chain, Rung };

/// How a 2D rung between two chain sites is realized: a single extra bond,
/// or two bonds through an inserted intermediate site (the hardware layout).
enum class RungStyle { DirectBond, MidSite };

/// Site roles used by the scattering analysis.
enum class Region { BeforeRung, AfterRungSameChain, OtherChain, RungSite };

struct Bond {
  int a = 0;
  int b = 0;
  Layer layer = Layer::R;
  BondKind kind = BondKind::Chain;
};

/// Simulation geometry: sites, colored bonds, probe site, and (for scattering
/// setups) a per-site region partition. Immutable after construction.
struct LatticeSpec {
  int num_sites = 0;
  std::vector<Bond> bonds;
  int probe = 0;
  std::optional<std::vector<Region>> site_partition;

  std::vector<Bond> bonds_in_layer(Layer layer) const;
  std::vector<Bond> rung_bonds() const;
};

/// Folded 1D chain of `chain_len` sites with optional rung attachments.
/// Chain bonds alternate between two layers (even-index bonds first); each
/// rung is either one extra bond or two bonds through an added mid-site,
/// placed so every layer stays a matching.
///
/// Throws std::invalid_argument on invalid sites, adjacent/duplicate
/// attachments, or when no 3-matching bond coloring exists.
LatticeSpec build_folded_chain(int chain_len,
                               const std::vector<std::pair<int, int>>& rung_attachments,
                               RungStyle rung_style, int probe);

/// Two chains of `chain_len` sites joined by a rung site: one rung bond to
/// site `attach_1` of chain 1 and one to site `attach_2` of chain 2 (both
/// chain-local indices). The probe sits at site 0, the far end of chain 1,
/// and site_partition is populated for scattering sums.
LatticeSpec build_scattering_geometry(int chain_len, int attach_1, int attach_2);

/// Diagnostic invariant check; returns one human-readable violation per
/// problem (empty means the spec is valid). Never throws.
std::vector<std::string> validate(const LatticeSpec& spec);

/// Graph distance from `from` over all bonds; unreachable sites get -1.
std::vector<int> bond_distances(const LatticeSpec& spec, int from);

char layer_name(Layer layer);

std::string to_json_string(const LatticeSpec& spec);
LatticeSpec lattice_from_json_string(const std::string& text);

}  // namespace spinkick
