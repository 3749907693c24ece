// cmem/evaluation.hpp

// Copyright 2026  The cmem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CMEM_EVALUATION_HPP_
#define CMEM_EVALUATION_HPP_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmem/dataset.hpp"
#include "cmem/psnr.hpp"
#include "cmem/tensor.hpp"

namespace cmem {

// Test images stacked per generation class, [k, c, 28, 56] each.
using ClassImageIndex = std::map<ComboClass, Tensor>;

// Groups test rows by their full class (digits plus colors when present).
// Rows of test_images must align with manifest.test.
ClassImageIndex group_test_images(const DatasetManifest& manifest,
                                  const Tensor& test_images);

// Classes a generator is scored on: the held-out digit pairs, expanded by
// all nine color pairs for colored datasets. Sorted.
std::vector<ComboClass> eval_classes(const DatasetManifest& manifest);

struct ClassScore {
  std::string label;
  Scalar psnr = 0.0;
};

// One table cell: a (method, modality) pair scored over all classes.
struct MethodScores {
  std::string method;
  std::string modality;
  std::vector<ClassScore> classes;
  Scalar mean_psnr = 0.0;  // arithmetic mean over classes
};

// Generates one image per class and scores it against the nearest test
// image of that same class. Missing classes in the index are an error.
MethodScores evaluate_method(
    const std::string& method, const std::string& modality,
    const std::function<Tensor(const ComboClass&)>& generate,
    const std::vector<ComboClass>& classes, const ClassImageIndex& index,
    const PsnrOptions& opt = {});

nlohmann::json method_scores_to_json(const MethodScores& scores);

// Aligned text table, methods down, modalities across, mean dB per cell.
std::string format_score_table(const std::vector<MethodScores>& cells);

}  // namespace cmem

#endif  // CMEM_EVALUATION_HPP_
