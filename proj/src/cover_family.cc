// Copyright 2026 The Designsearch Authors.
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

// Programmatic family of annotated Cover pages used by the space-size sweep.
// Each size switches on a subset of six exploration slots with a fixed number
// of options per slot.

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "designsearch/error.h"
#include "designsearch/sim.h"

namespace designsearch::sim {
namespace {

constexpr std::string_view kCoverTemplate = R"html(<!doctype html>
<html lang="en">
<head>
  <meta charset="utf-8">
  <meta name="viewport" content="width=device-width, initial-scale=1">
  <title>Cover</title>
  <style>
    html, body { height: 100%; margin: 0; }
    body { display: flex; color: #fff; text-align: center; background-color: #333; font-family: system-ui, sans-serif; }
    .cover-container { max-width: 42em; margin: auto; padding: 1rem; }
    .masthead { display: flex; justify-content: space-between; }
    .nav-link { color: rgba(255, 255, 255, .5); padding: .25rem 0; margin-left: 1rem; text-decoration: none; }
    .btn-lg { display: inline-block; padding: .75rem 1.25rem; border-radius: .3rem; color: #333; background: #fff; text-decoration: none; }
  </style>
</head>
<body id="page"{slot0}>
  <div class="cover-container">
    <header class="masthead" id="masthead"{slot5}>
      <h3 class="masthead-brand" id="brand">Cover</h3>
      <nav class="nav" id="nav">
        <a class="nav-link active" href="#">Home</a>
        <a class="nav-link" href="#">Features</a>
        <a class="nav-link" href="#">Contact</a>
      </nav>
    </header>
    <main class="inner cover" id="hero">
      <h1 class="cover-heading" id="headline"{slot1}{slot2}>Cover your page.</h1>
      <p class="lead" id="lead"{slot3}>Cover is a one-page template for building simple and beautiful home pages.</p>
      <p class="lead"><a href="#" class="btn btn-lg" id="cta"{slot4}>Learn more</a></p>
    </main>
    <footer class="mastfoot"><p>Cover template.</p></footer>
  </div>
</body>
</html>
)html";

struct Slot {
  std::string_view property;
  std::array<std::string_view, 11> pool;
};

constexpr std::array<Slot, 6> kSlots = {{
    {"background-color",
     {"#333", "#1b1f23", "#2c3e50", "#4b2c50", "#0b3d2e", "#5a1e1e", "#102a43",
      "#3d3d3d", "#222831", "#0f4c5c", "#6b4226"}},
    {"font-family",
     {"Georgia", "serif", "Helvetica", "monospace", "Verdana", "Tahoma",
      "cursive", "Garamond", "Futura", "Palatino", "system-ui"}},
    {"font-size",
     {"2rem", "2.5rem", "3rem", "3.5rem", "4rem", "1.75rem", "2.25rem",
      "2.75rem", "3.25rem", "4.5rem", "5rem"}},
    {"color",
     {"#fff", "#ddd", "#bbb", "#f8f9fa", "#ffe8a1", "#a1e3ff", "#c3f0ca",
      "#ffc9c9", "#e0c3fc", "#fde2e4", "#cfd8dc"}},
    {"background-color",
     {"#fff", "#0d6efd", "#198754", "#dc3545", "#ffc107", "#6f42c1", "#20c997",
      "#fd7e14", "#0dcaf0", "#6c757d", "#d63384"}},
    {"padding",
     {"0", "1rem", "2rem", "0.5rem", "1.5rem", "3rem", "0.25rem", "2.5rem",
      "4rem", "0.75rem", "5rem"}},
}};

// Option count per slot (0 = slot off) for each supported size.
const std::map<uint64_t, std::array<int, 6>>& Layouts() {
  static const auto* layouts = new std::map<uint64_t, std::array<int, 6>>{
      {50, {2, 5, 5, 0, 0, 0}},
      {200, {2, 4, 5, 5, 0, 0}},
      {500, {4, 5, 5, 5, 0, 0}},
      {972, {3, 3, 3, 3, 3, 4}},
      {1000, {2, 4, 5, 5, 5, 0}},
      {3000, {2, 3, 4, 5, 5, 5}},
      {11000, {2, 4, 5, 5, 5, 11}},
  };
  return *layouts;
}

}  // namespace

std::vector<uint64_t> CoverFamilySizes() {
  std::vector<uint64_t> sizes;
  for (const auto& [size, layout] : Layouts()) sizes.push_back(size);
  return sizes;
}

std::string CoverFamilySpec(uint64_t size) {
  auto it = Layouts().find(size);
  if (it == Layouts().end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "no Cover family member of size " + std::to_string(size));
  }
  std::string html(kCoverTemplate);
  for (size_t slot = 0; slot < kSlots.size(); ++slot) {
    std::string markup;
    if (const int count = it->second[slot]; count > 0) {
      markup = " explore-" + std::string(kSlots[slot].property) + "=\"";
      for (int o = 0; o < count; ++o) {
        if (o > 0) markup += ' ';
        markup += kSlots[slot].pool[o];
      }
      markup += '"';
    }
    const std::string placeholder = "{slot" + std::to_string(slot) + "}";
    html.replace(html.find(placeholder), placeholder.size(), markup);
  }
  return html;
}

}  // namespace designsearch::sim
