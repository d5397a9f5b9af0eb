/**
 * Copyright 2026 The flnoise Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "flnoise/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "flnoise/errors.hpp"
#include "flnoise/text.hpp"

namespace flnoise {
namespace {

constexpr std::string_view kMagic = "flnoise-manifest 1";

std::vector<std::string_view> words(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && line[i] == ' ') ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

[[noreturn]] void bad(std::size_t line, const std::string& what) {
  throw ParseError("manifest line " + std::to_string(line) + ": " + what);
}

std::uint64_t number(std::string_view s, std::size_t line) {
  auto v = parse_unsigned(s);
  if (!v) bad(line, "bad integer '" + std::string(s) + "'");
  return *v;
}

}  // namespace

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string_view to_string(CellStatus status) { return status == CellStatus::complete ? "complete" : "pending"; }

void write_manifest(std::ostream& out, const RunManifest& m) {
  out << kMagic << '\n';
  out << "name " << m.name << '\n';
  out << "spec_hash " << hex64(m.spec_hash) << '\n';
  out << "version " << m.version << '\n';
  out << "master_seed " << m.master_seed << '\n';
  for (const auto& [purpose, seed] : m.seeds) out << "seed " << purpose << ' ' << seed << '\n';
  out << "clients " << m.clients << '\n';
  out << "rounds " << m.rounds << '\n';
  for (std::size_t a = 0; a < m.architectures.size(); ++a) {
    out << "architecture " << a << ' ';
    for (std::size_t i = 0; i < m.architectures[a].size(); ++i) out << (i ? "," : "") << m.architectures[a][i];
    out << '\n';
  }
  for (const auto& c : m.cells) {
    out << "cell " << c.run_id << ' ' << to_string(c.status) << ' ' << to_string(c.strategy) << ' '
        << c.architecture << ' ';
    for (std::size_t i = 0; i < c.noise.size(); ++i) out << (i ? "," : "") << format_double(c.noise[i]);
    out << ' ' << c.metrics.generic_string() << '\n';
  }
  out << "summary " << m.summary.generic_string() << '\n';
  out << "regression " << m.regression.generic_string() << '\n';
}

RunManifest parse_manifest(std::istream& in) {
  RunManifest m;
  std::string raw;
  std::size_t line_no = 0;
  if (!std::getline(in, raw) || raw != kMagic) throw ParseError("manifest: missing 'flnoise-manifest 1' header");
  ++line_no;
  while (std::getline(in, raw)) {
    ++line_no;
    if (trim(raw).empty()) continue;
    const auto w = words(raw);
    const std::string_view key = w[0];
    auto need = [&](std::size_t n) {
      if (w.size() != n) bad(line_no, "expected " + std::to_string(n - 1) + " fields after '" + std::string(key) + "'");
    };
    if (key == "name") {
      m.name = std::string(trim(std::string_view(raw).substr(4)));
    } else if (key == "spec_hash") {
      need(2);
      try {
        std::size_t used = 0;
        m.spec_hash = std::stoull(std::string(w[1]), &used, 16);
        if (used != w[1].size()) bad(line_no, "bad spec_hash");
      } catch (const std::logic_error&) {
        bad(line_no, "bad spec_hash");
      }
    } else if (key == "version") {
      need(2);
      m.version = std::string(w[1]);
    } else if (key == "master_seed") {
      need(2);
      m.master_seed = number(w[1], line_no);
    } else if (key == "seed") {
      need(3);
      m.seeds.emplace_back(std::string(w[1]), number(w[2], line_no));
    } else if (key == "clients") {
      need(2);
      m.clients = number(w[1], line_no);
    } else if (key == "rounds") {
      need(2);
      m.rounds = number(w[1], line_no);
    } else if (key == "architecture") {
      need(3);
      if (number(w[1], line_no) != m.architectures.size()) bad(line_no, "architectures out of order");
      std::vector<std::size_t> dims;
      for (auto d : split(w[2], ',')) dims.push_back(number(d, line_no));
      m.architectures.push_back(std::move(dims));
    } else if (key == "cell") {
      need(7);
      CellRecord c;
      c.run_id = std::string(w[1]);
      if (w[2] == "complete") {
        c.status = CellStatus::complete;
      } else if (w[2] != "pending") {
        bad(line_no, "bad cell status '" + std::string(w[2]) + "'");
      }
      try {
        c.strategy = parse_strategy(w[3]);
      } catch (const std::exception& e) {
        bad(line_no, e.what());
      }
      c.architecture = number(w[4], line_no);
      if (c.architecture >= m.architectures.size()) bad(line_no, "cell references an unknown architecture");
      for (auto v : split(w[5], ',')) {
        auto d = parse_double(v);
        if (!d) bad(line_no, "bad noise level");
        c.noise.push_back(*d);
      }
      c.metrics = std::string(w[6]);
      m.cells.push_back(std::move(c));
    } else if (key == "summary") {
      need(2);
      m.summary = std::string(w[1]);
    } else if (key == "regression") {
      need(2);
      m.regression = std::string(w[1]);
    } else {
      bad(line_no, "unknown record '" + std::string(key) + "'");
    }
  }
  return m;
}

RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("manifest: cannot open " + path.string());
  RunManifest m = parse_manifest(in);
  m.root = path.parent_path();
  return m;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace flnoise
