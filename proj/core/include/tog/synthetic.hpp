#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tog/datagen.hpp"
#include "tog/geometry.hpp"
#include "tog/random.hpp"
#include "tog/tensor.hpp"

namespace tog::synth {

// One procedurally generated object: surface points (head rows first, then
// handle rows) and labeled grasps whose parts alternate head/handle.
struct InstanceGeometry {
  Tensor cloud;  // (points, 3)
  std::size_t head_points = 0;
  std::vector<data::GraspEntry> grasps;
};

InstanceGeometry make_instance(const std::string& class_id, const std::vector<std::string>& tasks,
                               const data::SynthLexicon& lexicon, std::size_t points, std::size_t grasp_count,
                               Rng& rng);

}  // namespace tog::synth
