// Copyright 2026 The w2s-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef W2S_SRC_COMPENSATED_SUM_HPP_
#define W2S_SRC_COMPENSATED_SUM_HPP_

#include <cmath>

namespace w2s::internal {

// Neumaier variant of Kahan summation. Power-law tails span dozens of
// decades, so plain accumulation loses the tail entirely for large p.
class CompensatedSum {
 public:
  void Add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Sums f(i) for i = size-1 down to 0. Every spectral sum in the library
// walks the spectrum tail first, which is smallest first for sorted input.
template <typename F>
double SumTailFirst(long size, F&& f) {
  CompensatedSum acc;
  for (long i = size - 1; i >= 0; --i) acc.Add(f(i));
  return acc.value();
}

}  // namespace w2s::internal

#endif  // W2S_SRC_COMPENSATED_SUM_HPP_
