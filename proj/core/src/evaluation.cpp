// cmem/evaluation.cpp

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

#include "cmem/evaluation.hpp"

#include <algorithm>
#include <iomanip>
#include <set>
#include <sstream>

#include "cmem/common.hpp"

namespace cmem {

ClassImageIndex group_test_images(const DatasetManifest& manifest,
                                  const Tensor& test_images) {
  const std::size_t n = manifest.test.size();
  CMEM_CHECK(test_images.rank() == 4 && test_images.dim(0) == n)
      << "group_test_images: " << test_images.shape_str()
      << " does not stack " << n << " test records";
  const std::size_t stride = test_images.numel() / std::max<std::size_t>(n, 1);

  std::map<ComboClass, std::vector<std::size_t>> rows;
  for (std::size_t i = 0; i < n; ++i)
    rows[manifest.test[i].cls].push_back(i);

  ClassImageIndex index;
  for (const auto& [cls, ids] : rows) {
    Shape s = test_images.shape();
    s[0] = ids.size();
    Tensor stack(s);
    for (std::size_t j = 0; j < ids.size(); ++j)
      std::copy(test_images.data() + ids[j] * stride,
                test_images.data() + (ids[j] + 1) * stride,
                stack.data() + j * stride);
    index.emplace(cls, std::move(stack));
  }
  return index;
}

std::vector<ComboClass> eval_classes(const DatasetManifest& manifest) {
  std::vector<ComboClass> out;
  for (const ComboClass& pair : manifest.held_out) {
    if (!manifest.spec.colored) {
      out.push_back(pair);
      continue;
    }
    for (int c1 = 0; c1 < kNumColors; ++c1)
      for (int c2 = 0; c2 < kNumColors; ++c2)
        out.push_back({pair.d1, pair.d2, c1, c2});
  }
  std::sort(out.begin(), out.end());
  return out;
}

MethodScores evaluate_method(
    const std::string& method, const std::string& modality,
    const std::function<Tensor(const ComboClass&)>& generate,
    const std::vector<ComboClass>& classes, const ClassImageIndex& index,
    const PsnrOptions& opt) {
  CMEM_CHECK(!classes.empty()) << "evaluate_method: no classes to score";
  MethodScores out;
  out.method = method;
  out.modality = modality;
  Scalar total = 0.0;
  for (const ComboClass& cls : classes) {
    auto it = index.find(cls);
    CMEM_CHECK(it != index.end())
        << "evaluate_method: class \"" << cls.label()
        << "\" has no test images";
    Tensor img = generate(cls);
    const Scalar db = psnr_nearest(img, it->second, opt).psnr;
    out.classes.push_back({cls.label(), db});
    total += db;
  }
  out.mean_psnr = total / (Scalar)classes.size();
  return out;
}

nlohmann::json method_scores_to_json(const MethodScores& scores) {
  nlohmann::json per_class;
  for (const ClassScore& c : scores.classes) per_class[c.label] = c.psnr;
  return {{"method", scores.method},
          {"modality", scores.modality},
          {"mean_psnr", scores.mean_psnr},
          {"per_class", per_class}};
}

std::string format_score_table(const std::vector<MethodScores>& cells) {
  std::vector<std::string> methods, modalities;
  for (const MethodScores& c : cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
      methods.push_back(c.method);
    if (std::find(modalities.begin(), modalities.end(), c.modality) ==
        modalities.end())
      modalities.push_back(c.modality);
  }
  std::size_t name_w = 6;  // "method"
  for (const std::string& m : methods) name_w = std::max(name_w, m.size());

  std::ostringstream os;
  os << std::left << std::setw((int)name_w + 2) << "method";
  for (const std::string& mod : modalities)
    os << std::right << std::setw(10) << mod;
  os << "\n";
  for (const std::string& m : methods) {
    os << std::left << std::setw((int)name_w + 2) << m;
    for (const std::string& mod : modalities) {
      auto it = std::find_if(cells.begin(), cells.end(),
                             [&](const MethodScores& c) {
                               return c.method == m && c.modality == mod;
                             });
      if (it == cells.end()) {
        os << std::right << std::setw(10) << "-";
      } else {
        std::ostringstream v;
        v << std::fixed << std::setprecision(2) << it->mean_psnr;
        os << std::right << std::setw(10) << v.str();
      }
    }
    os << "\n";
  }
  return os.str();
}

}  // namespace cmem
