#include <algorithm>
#include <cmath>

#include "headsim/dielectrics.hpp"

namespace headsim::dielectrics {

TissueRecord free_space() {
  return TissueRecord{"Air", StaticDielectric{1.0, 0.0}, 1.204, std::nullopt};
}

LayerStack::LayerStack(std::vector<Layer> layers, TissueRecord front, TissueRecord back)
    : layers_(std::move(layers)), front_(std::move(front)), back_(std::move(back)) {
  validate(front_.dispersion);
  validate(back_.dispersion);
  edges_.reserve(layers_.size() + 1);
  edges_.push_back(0.0);
  for (const auto& layer : layers_) {
    if (!(layer.thickness > 0.0) || !std::isfinite(layer.thickness)) {
      throw DomainError("layer '" + layer.tissue.name + "' must have positive thickness");
    }
    if (!(layer.tissue.mass_density > 0.0)) {
      throw DomainError("tissue '" + layer.tissue.name + "' must have positive mass density");
    }
    validate(layer.tissue.dispersion);
    edges_.push_back(edges_.back() + layer.thickness);
  }
}

double LayerStack::thinnest_layer() const {
  if (layers_.empty()) throw DomainError("empty stack has no thinnest layer");
  return std::min_element(layers_.begin(), layers_.end(), [](const Layer& a, const Layer& b) {
           return a.thickness < b.thickness;
         })->thickness;
}

std::size_t LayerStack::layer_at(double depth) const {
  if (layers_.empty()) throw DomainError("layer_at on an empty stack");
  if (depth < 0.0 || depth > total_thickness()) throw DomainError("depth outside the stack");
  const auto it = std::upper_bound(edges_.begin(), edges_.end(), depth);
  const auto index = static_cast<std::size_t>(std::distance(edges_.begin(), it)) - 1;
  return std::min(index, layers_.size() - 1);
}

LayerStack LayerStack::reversed() const {
  return LayerStack(std::vector<Layer>(layers_.rbegin(), layers_.rend()), back_, front_);
}

LayerStack build_head_stack(const TissueDatabase& db) {
  std::vector<Layer> layers;
  double outer = 0.0;
  for (std::size_t i = 0; i < kHeadLayerThickness.size(); ++i) {
    layers.push_back({db.at(kHeadTissues[i]), kHeadLayerThickness[i]});
    outer += kHeadLayerThickness[i];
  }
  layers.push_back({db.at(kHeadTissues.back()), kHeadModelDepth - outer});
  return LayerStack(std::move(layers));
}

double layer_end_depth(const LayerStack& stack, std::string_view name) {
  for (std::size_t i = 0; i < stack.size(); ++i) {
    if (stack.layers()[i].tissue.name == name) return stack.edges()[i + 1];
  }
  throw DomainError("no layer named '" + std::string(name) + "'");
}

LayerStack insert_inclusion(const LayerStack& stack, const Inclusion& inc) {
  if (!(inc.thickness > 0.0)) throw DomainError("inclusion thickness must be positive");
  const double begin = inc.begin();
  const double end = inc.end();
  if (begin < 0.0 || end > stack.total_thickness()) {
    throw DomainError("inclusion interval lies outside the stack");
  }
  if (inc.tissue) validate(inc.tissue->dispersion);

  std::vector<Layer> out;
  const auto& edges = stack.edges();
  bool placed = false;
  for (std::size_t i = 0; i < stack.size(); ++i) {
    const Layer& host = stack.layers()[i];
    const double a = edges[i];
    const double b = edges[i + 1];
    if (b <= begin || a >= end) {
      if (a >= end && !placed && inc.tissue) {
        out.push_back({*inc.tissue, end - begin});
        placed = true;
      }
      out.push_back(host);
      continue;
    }
    if (a < begin) out.push_back({host.tissue, begin - a});
    if (inc.tissue) {
      if (!placed) {
        out.push_back({*inc.tissue, end - begin});
        placed = true;
      }
    } else {
      out.push_back({host.tissue, std::min(b, end) - std::max(a, begin)});
    }
    if (b > end) out.push_back({host.tissue, b - end});
  }
  if (inc.tissue && !placed) out.push_back({*inc.tissue, end - begin});
  return LayerStack(std::move(out), stack.front(), stack.back());
}

}  // namespace headsim::dielectrics
