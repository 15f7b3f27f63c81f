// Copyright 2026 The poa-lab Authors
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

#ifndef POALAB_LAMBERT_W_H_
#define POALAB_LAMBERT_W_H_

namespace poalab {

// Lower real branch W_{-1}: the solution w <= -1 of w * exp(w) = x for
// x in [-1/e, 0). Arguments within 1e-15 of -1/e return exactly -1.
// Throws DomainError elsewhere.
double LambertWm1(double x);

}  // namespace poalab

#endif  // POALAB_LAMBERT_W_H_
