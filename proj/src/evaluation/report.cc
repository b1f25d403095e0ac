/*
 * Copyright 2026 The rcqa-rationale Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "rcqa/evaluation/report.h"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

namespace rcqa::evaluation {
namespace {

std::string Fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

std::string Pad(const std::string& s, std::size_t width, bool right = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return right ? fill + s : s + fill;
}

std::size_t ModelWidth(const std::vector<std::string>& names) {
  std::size_t width = 5;  // "Model"
  for (const auto& n : names) width = std::max(width, n.size());
  return width;
}

}  // namespace

std::string FormatFlipTable(const std::vector<FlipTableRow>& rows) {
  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.model);
  const std::size_t w = ModelWidth(names);
  std::ostringstream out;
  const std::string header =
      Pad("Model", w) + "  " + Pad("Mean", 8, true) + "  " +
      Pad("Variance", 8, true) + "  " + Pad("N", 6, true) + "  " +
      Pad("Flipped", 7, true);
  out << header << "\n" << std::string(header.size(), '-') << "\n";
  for (const auto& r : rows) {
    out << Pad(r.model, w) << "  " << Pad(Fixed(r.stats.mean, 3), 8, true)
        << "  " << Pad(Fixed(r.stats.variance, 3), 8, true) << "  "
        << Pad(std::to_string(r.stats.count), 6, true) << "  "
        << Pad(std::to_string(r.stats.flipped), 7, true) << "\n";
  }
  out << "Flip fraction: share of passage words removed before the decision "
         "flips (scale 0-1).\n";
  return out.str();
}

std::string FormatOverlapTable(const std::vector<OverlapTableRow>& rows) {
  std::vector<std::string> names;
  for (const auto& r : rows) names.push_back(r.model);
  const std::size_t w = ModelWidth(names);
  auto cells = [](const std::optional<OverlapMetrics>& m) {
    if (!m) return Pad("-", 6, true) + " " + Pad("-", 6, true) + " " +
                  Pad("-", 6, true);
    return Pad(Fixed(100.0 * m->precision, 1), 6, true) + " " +
           Pad(Fixed(100.0 * m->recall, 1), 6, true) + " " +
           Pad(Fixed(100.0 * m->f1, 1), 6, true);
  };
  std::ostringstream out;
  const std::string group = Pad("", w) + " | " + Pad("Incl. Answer Span", 20) +
                            " | " + Pad("Excl. Answer Span", 20);
  const std::string header = Pad("Model", w) + " | " + Pad("%P", 6, true) +
                             " " + Pad("%R", 6, true) + " " +
                             Pad("%F1", 6, true) + " | " + Pad("%P", 6, true) +
                             " " + Pad("%R", 6, true) + " " +
                             Pad("%F1", 6, true);
  out << group << "\n" << header << "\n" << std::string(header.size(), '-')
      << "\n";
  for (const auto& r : rows) {
    out << Pad(r.model, w) << " | " << cells(r.include_answer) << " | "
        << cells(r.exclude_answer) << "\n";
  }
  out << "Micro-averaged over pooled token counts; stop words and punctuation "
         "ignored.\n";
  return out.str();
}

std::string RenderHighlighted(const dataio::TokenizedText& passage,
                              const std::vector<std::size_t>& positions) {
  const std::set<std::size_t> marked(positions.begin(), positions.end());
  std::string out;
  std::size_t cursor = 0;
  const auto& tokens = passage.tokens;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!marked.contains(i)) continue;
    std::size_t j = i;
    while (j + 1 < tokens.size() && marked.contains(j + 1)) ++j;
    out += passage.raw.substr(cursor, tokens[i].begin - cursor);
    out += "[" + passage.raw.substr(tokens[i].begin,
                                    tokens[j].end - tokens[i].begin) + "]";
    cursor = tokens[j].end;
    i = j;
  }
  out += passage.raw.substr(cursor);
  return out;
}

}  // namespace rcqa::evaluation
