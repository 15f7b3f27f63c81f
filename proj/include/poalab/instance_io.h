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

#ifndef POALAB_INSTANCE_IO_H_
#define POALAB_INSTANCE_IO_H_

// JSON formats:
//
//   instance     {"k": 2, "bidders": [{"marginals": [1.0, 0.5]}, ...],
//                 "tie_break": "index" | {"favor": i} | {"favor_at_zero": i}}
//
// Bidder indices are 0-based. Certificates and reports are plain JSON objects
// with non-finite numbers written as null.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "poalab/auction.h"
#include "poalab/corruption.h"
#include "poalab/equilibria.h"
#include "poalab/tight_instance.h"

namespace poalab {

struct Instance {
  ValuationProfile valuations;
  TieBreakRule tie = TieBreakRule::IndexOrder();
};

// Throws InvalidInput with "<source>:<line>: <message>".
Instance ParseInstance(std::string_view text,
                       std::string_view source = "<input>");
Instance ReadInstanceFile(const std::string& path);

std::string InstanceToJson(const Instance& inst);

// Sorted non-increasing uniform marginals scaled so max_i v_i(k) = 1.
Instance GenerateInstance(std::size_t bidders, std::size_t items,
                          std::uint64_t seed);

std::string CertificateToJson(const PoACertificate& cert);
std::string TightReportToJson(const TightInstance& inst,
                              const TightReport& rep);
std::string FpaReportToJson(const std::string& rule, double gamma,
                            const FpaReport& rep);

// Writes `text` to `path`; throws InvalidInput if the file cannot be written.
void WriteFile(const std::string& path, const std::string& text);

}  // namespace poalab

#endif  // POALAB_INSTANCE_IO_H_
