// Copyright 2026 The pulsebss Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PULSEBSS_ERRORS_HPP
#define PULSEBSS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pulsebss {

enum class errc {
  invalid_spec,          // bad parameter values (specs, configs)
  shape_mismatch,        // grid/length disagreement between inputs
  invalid_matrix,        // non-finite mixing/demixing entries
  oversampling_request,  // pulse period below the waveform grid step
  empty_input,           // not enough data to operate on
  ill_posed,             // rank-deficient fit design (aliased angles)
  degenerate_fit,        // fitted moment curve violates PSD constraints
  isotropic_mixture,     // no second-moment anisotropy; theta0 undefined
  no_fourth_harmonic,    // no fourth-harmonic power; phi0 undetermined
  degenerate,            // zero-energy signal where energy is required
  io_error,
};

const char* errc_name(errc c);

// Library-wide exception. `stage` names the pipeline step that raised it
// when thrown from an orchestration (separate, run_scenario).
class sim_error : public std::runtime_error {
 public:
  sim_error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  sim_error(errc code, std::string stage, const std::string& what)
      : std::runtime_error(stage.empty() ? what : stage + ": " + what),
        code_(code),
        stage_(std::move(stage)) {}

  errc code() const { return code_; }
  const std::string& stage() const { return stage_; }

 private:
  errc code_;
  std::string stage_;
};

}  // namespace pulsebss

#endif  // PULSEBSS_ERRORS_HPP
