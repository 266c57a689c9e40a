// Copyright 2026 The adauction Authors
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

// File formats: instance / values / distribution JSON, allocation JSON and
// CSV output. Needs nlohmann/json on the include path.

#ifndef ADAUCTION_IO_HPP_
#define ADAUCTION_IO_HPP_

#include <charconv>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "adauction/core.hpp"
#include "adauction/distributions.hpp"
#include "json.hpp"

namespace adauction {

using Json = nlohmann::json;

// Shortest decimal string that round-trips.
inline std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  if (res.ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, res.ptr);
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(path + ": " + e.what());
  }
}

inline Model parse_model(const std::string& name) {
  if (name == "mnl") return Model::kMnl;
  if (name == "cascade") return Model::kCascade;
  throw InvalidArgument("unknown model '" + name + "' (expected mnl or cascade)");
}

inline Instance instance_from_json(const Json& j) {
  try {
    Instance inst;
    inst.n = j.at("n").get<std::size_t>();
    inst.m = j.at("m").get<std::size_t>();
    inst.k = j.at("k").get<std::size_t>();
    inst.model = parse_model(j.at("model").get<std::string>());
    const auto rows = j.at("p").get<std::vector<std::vector<double>>>();
    if (rows.size() != inst.n) throw InvalidArgument("p has " + std::to_string(rows.size()) +
                                                     " rows, expected n = " + std::to_string(inst.n));
    for (const auto& r : rows) {
      if (r.size() != inst.m) throw InvalidArgument("every row of p needs m entries");
    }
    inst.p = inst.n > 0 ? Matrix::from_rows(rows) : Matrix(0, inst.m);
    require_valid(inst);
    return inst;
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad instance JSON: ") + e.what());
  }
}

inline Json instance_to_json(const Instance& inst) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < inst.n; ++i) {
    const auto r = inst.p.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"n", inst.n}, {"m", inst.m}, {"k", inst.k}, {"model", model_name(inst.model)},
          {"p", rows}};
}

inline Instance load_instance(const std::string& path) {
  return instance_from_json(read_json_file(path));
}

inline std::vector<double> load_values(const std::string& path, std::size_t n) {
  const Json j = read_json_file(path);
  std::vector<double> v;
  try {
    v = j.get<std::vector<double>>();
  } catch (const Json::exception& e) {
    throw InvalidArgument(path + ": expected a JSON array of numbers");
  }
  require_length(v, n, "values file");
  return v;
}

inline ValueDistribution distribution_from_json(const Json& j) {
  try {
    const std::string family = j.at("family").get<std::string>();
    if (family == "uniform") {
      return ValueDistribution::uniform(j.at("a").get<double>(), j.at("b").get<double>());
    }
    if (family == "exponential") return ValueDistribution::exponential(j.at("rate").get<double>());
    if (family == "truncated_normal") {
      return ValueDistribution::truncated_normal(j.at("mu").get<double>(),
                                                 j.at("sigma").get<double>(),
                                                 j.at("lo").get<double>(), j.at("hi").get<double>());
    }
    throw InvalidArgument("unknown distribution family '" + family + "'");
  } catch (const Json::exception& e) {
    throw InvalidArgument(std::string("bad distribution JSON: ") + e.what());
  }
}

inline Json distribution_to_json(const ValueDistribution& d) {
  const auto& f = d.family();
  if (auto* u = std::get_if<Uniform>(&f)) return {{"family", "uniform"}, {"a", u->a}, {"b", u->b}};
  if (auto* e = std::get_if<Exponential>(&f)) return {{"family", "exponential"}, {"rate", e->rate}};
  if (auto* t = std::get_if<TruncatedNormal>(&f)) {
    return {{"family", "truncated_normal"}, {"mu", t->mu}, {"sigma", t->sigma},
            {"lo", t->lo}, {"hi", t->hi}};
  }
  throw InvalidArgument("custom distributions have no JSON form");
}

// A single object applies to every advertiser; an array gives one per advertiser.
inline std::vector<ValueDistribution> distributions_from_json(const Json& j, std::size_t n) {
  std::vector<ValueDistribution> out;
  if (j.is_array()) {
    if (j.size() != n) {
      throw InvalidArgument("distribution list has " + std::to_string(j.size()) +
                            " entries, expected " + std::to_string(n));
    }
    for (const Json& e : j) out.push_back(distribution_from_json(e));
  } else {
    const ValueDistribution d = distribution_from_json(j);
    out.assign(n, d);
  }
  return out;
}

inline std::vector<ValueDistribution> load_distributions(const std::string& path, std::size_t n) {
  return distributions_from_json(read_json_file(path), n);
}

inline Json allocation_to_json(const AugmentedAllocation& chi) {
  Json pairs = Json::array();
  for (const auto& [i, j] : chi.allocation) pairs.push_back({{"advertiser", i}, {"position", j}});
  return {{"allocation", pairs}, {"order", chi.permutation.order()}};
}

// RFC 4180 field quoting.
inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::vector<std::string>& header) { row(header); }

  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i > 0) buf_ += ',';
      buf_ += csv_field(fields[i]);
    }
    buf_ += "\r\n";
  }

  const std::string& str() const { return buf_; }

 private:
  std::string buf_;
};

}  // namespace adauction

#endif  // ADAUCTION_IO_HPP_
