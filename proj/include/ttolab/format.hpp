/* Copyright 2026 The ttolab Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License. */

#ifndef TTOLAB_FORMAT_HPP
#define TTOLAB_FORMAT_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace ttolab {

/// Round-trip decimal form of a double ("%.17g").
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace ttolab

#endif  // TTOLAB_FORMAT_HPP
