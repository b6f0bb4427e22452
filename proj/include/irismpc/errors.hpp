// Copyright 2026 The irismpc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace irismpc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A Galois ring element with no inverse (projects to 0 in F_4).
struct NonUnitError : Error {
  using Error::Error;
};

// Channel failure: peer closed, timeout, short read/write.
struct TransportError : Error {
  using Error::Error;
};

// Parties disagree on protocol parameters at handshake time.
struct ConfigMismatchError : Error {
  using Error::Error;
};

// Configuration violates the overflow bounds required for the
// MSB-as-comparison trick.
struct BoundsError : Error {
  using Error::Error;
};

// Replication cross-check failed during reconstruction.
struct InconsistentShareError : Error {
  using Error::Error;
};

}  // namespace irismpc
