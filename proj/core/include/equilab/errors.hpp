/*
   Copyright 2026 The equilab authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef EQUILAB_ERRORS_HPP
#define EQUILAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace equilab {

/// Thrown when a cost guard (enumeration size, scan size, ...) is exceeded.
/// Callers that have a cheaper fallback catch this type specifically.
class guard_error : public std::runtime_error {
   public:
    explicit guard_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown for invalid experiment configuration (missing nu, bad prime, ...).
class config_error : public std::runtime_error {
   public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace equilab

#endif
