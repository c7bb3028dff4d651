#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "headsim/common.hpp"

namespace headsim::dielectrics {

/// Frequency-independent relative permittivity and conductivity (S/m).
struct StaticDielectric {
  double eps_r = 1.0;
  double sigma = 0.0;

  bool operator==(const StaticDielectric&) const = default;
};

struct ColeColePole {
  double delta_eps = 0.0;
  double tau = 0.0;    // s
  double alpha = 0.0;  // in [0, 1)

  bool operator==(const ColeColePole&) const = default;
};

/// ε(ω) = ε∞ + Σ Δεₙ / (1 + (jωτₙ)^(1-αₙ)) + σ_s / (jωε₀)
struct ColeCole {
  double eps_inf = 1.0;
  std::vector<ColeColePole> poles;
  double sigma_static = 0.0;

  bool operator==(const ColeCole&) const = default;
};

using DispersionSpec = std::variant<StaticDielectric, ColeCole>;

/// Throws DomainError if any parameter violates the model's invariants.
void validate(const DispersionSpec& spec);

/// Complex relative permittivity at `frequency` (Hz). Throws DomainError for f <= 0.
Complex complex_permittivity(const DispersionSpec& spec, double frequency);

/// Conductivity equivalent of the loss term, -ωε₀·Im ε(ω). Returns `sigma`
/// unchanged for static media.
double effective_conductivity(const DispersionSpec& spec, double frequency);

struct TissueRecord {
  std::string name;
  DispersionSpec dispersion;
  double mass_density = 1.0;  // kg/m³
  std::optional<double> outer_radius_mm;  // sphere-model metadata only

  bool operator==(const TissueRecord&) const = default;
};

TissueRecord free_space();

class TissueDatabase {
 public:
  TissueDatabase() = default;
  /// Throws ConfigError on duplicate names or invalid records.
  explicit TissueDatabase(std::vector<TissueRecord> records);

  const std::vector<TissueRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }
  bool empty() const noexcept { return records_.empty(); }

  const TissueRecord* find(std::string_view name) const noexcept;
  /// Throws DomainError when `name` is absent.
  const TissueRecord& at(std::string_view name) const;

 private:
  std::vector<TissueRecord> records_;
};

/// Parses the JSON tissue schema (see data/tissues.json). An empty or
/// whitespace-only document yields an empty database.
TissueDatabase load_tissue_db(std::string_view document);
TissueDatabase load_tissue_db_file(const std::filesystem::path& path);
std::string dump_tissue_db(const TissueDatabase& db);

/// The shipped database: the seven head tissues plus "Tumor".
const TissueDatabase& default_tissue_db();

struct Layer {
  TissueRecord tissue;
  double thickness = 0.0;  // m

  bool operator==(const Layer&) const = default;
};

/// Planar stratification along the propagation axis. Depth 0 is the outer
/// face of the first layer; the bounding media fill z < 0 and z > total.
class LayerStack {
 public:
  explicit LayerStack(std::vector<Layer> layers, TissueRecord front = free_space(),
                      TissueRecord back = free_space());

  const std::vector<Layer>& layers() const noexcept { return layers_; }
  const TissueRecord& front() const noexcept { return front_; }
  const TissueRecord& back() const noexcept { return back_; }
  std::size_t size() const noexcept { return layers_.size(); }

  double total_thickness() const noexcept { return edges_.back(); }
  /// Cumulative interface depths, size() + 1 entries starting at 0.
  const std::vector<double>& edges() const noexcept { return edges_; }
  double thinnest_layer() const;

  /// Index of the layer containing `depth`; interfaces belong to the deeper
  /// layer, except the back face which belongs to the last layer.
  std::size_t layer_at(double depth) const;

  LayerStack reversed() const;

  bool operator==(const LayerStack& other) const {
    return layers_ == other.layers_ && front_ == other.front_ && back_ == other.back_;
  }

 private:
  std::vector<Layer> layers_;
  TissueRecord front_;
  TissueRecord back_;
  std::vector<double> edges_;
};

inline constexpr std::array<std::string_view, 7> kHeadTissues = {
    "Skin", "Fat", "Skull", "Dura Mater", "CSF", "Gray Matter", "White Matter"};
// Outer six layer depths; white matter fills the remainder up to kHeadModelDepth.
inline constexpr std::array<double, 6> kHeadLayerThickness = {1.35e-3, 1.4e-3, 5.3e-3,
                                                              0.36e-3, 2.1e-3, 3.37e-3};
inline constexpr double kHeadModelDepth = 50e-3;
inline constexpr std::string_view kTumorTissue = "Tumor";

LayerStack build_head_stack(const TissueDatabase& db);

/// Depth of the back face of the first layer named `name`.
double layer_end_depth(const LayerStack& stack, std::string_view name);

struct Inclusion {
  /// nullopt keeps each host layer's own tissue inside the interval (a
  /// null-contrast inclusion that only splits layers).
  std::optional<TissueRecord> tissue;
  double center_depth = 0.0;  // m from the outer skin surface
  double thickness = 0.0;     // m

  double begin() const noexcept { return center_depth - thickness / 2; }
  double end() const noexcept { return center_depth + thickness / 2; }
};

LayerStack insert_inclusion(const LayerStack& stack, const Inclusion& inclusion);

}  // namespace headsim::dielectrics
