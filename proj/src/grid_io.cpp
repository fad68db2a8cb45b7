#include "qew/grid_io.hpp"

#include "qew/error.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace qew {

namespace {

const char* const kReservedKeys[] = {"axis1_kind", "axis1_min", "axis1_max",
                                     "axis2_kind", "axis2_min", "axis2_max"};

bool is_reserved(std::string_view key) {
  for (const char* r : kReservedKeys) {
    if (key == r) return true;
  }
  return false;
}

int parse_int(const std::string& s, std::string_view what) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ValidationError("malformed integer for " + std::string(what) + ": '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ValidationError("trailing characters in number '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError("malformed number '" + s + "'");
  }
}

} // namespace

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_grid_csv(const JointAmplitudeGrid& grid, std::ostream& out) {
  const Interval r1 = grid.axis1_range();
  const Interval r2 = grid.axis2_range();
  out << "# axis1_kind=" << axis_kind_name(grid.axis1_kind()) << '\n'
      << "# axis1_min=" << r1.lo << '\n'
      << "# axis1_max=" << r1.hi << '\n'
      << "# axis2_kind=" << axis_kind_name(grid.axis2_kind()) << '\n'
      << "# axis2_min=" << r2.lo << '\n'
      << "# axis2_max=" << r2.hi << '\n';
  for (const auto& [k, v] : grid.metadata()) out << "# " << k << '=' << v << '\n';
  out << "axis1,axis2,re,im,prob\n";
  for (int v1 = r1.lo; v1 <= r1.hi; ++v1) {
    for (int v2 = r2.lo; v2 <= r2.hi; ++v2) {
      const cplx c = grid.at(v1, v2);
      out << v1 << ',' << v2 << ',' << format_real(c.real()) << ',' << format_real(c.imag()) << ','
          << format_real(std::norm(c)) << '\n';
    }
  }
}

JointAmplitudeGrid read_grid_csv(std::istream& in) {
  Metadata header;
  Metadata meta;
  std::string line;
  bool saw_columns = false;
  std::vector<std::pair<std::pair<int, int>, cplx>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(line.find_first_not_of("# "));
      const auto eq = body.find('=');
      if (eq == std::string::npos) throw ValidationError("header line without '=': " + line);
      std::string key = body.substr(0, eq);
      std::string value = body.substr(eq + 1);
      (is_reserved(key) ? header : meta).emplace_back(std::move(key), std::move(value));
      continue;
    }
    if (!saw_columns) {
      if (line != "axis1,axis2,re,im,prob") throw ValidationError("unexpected column header: " + line);
      saw_columns = true;
      continue;
    }
    std::stringstream ss(line);
    std::string f[5];
    for (auto& field : f) {
      if (!std::getline(ss, field, ',')) throw ValidationError("short CSV row: " + line);
    }
    rows.push_back({{parse_int(f[0], "axis1"), parse_int(f[1], "axis2")},
                    cplx(parse_double(f[2]), parse_double(f[3]))});
  }
  auto need = [&](std::string_view key) {
    const std::string v = metadata_value(header, key);
    if (v.empty()) throw ValidationError("CSV header is missing '" + std::string(key) + "'");
    return v;
  };
  const Interval r1{parse_int(need("axis1_min"), "axis1_min"), parse_int(need("axis1_max"), "axis1_max")};
  const Interval r2{parse_int(need("axis2_min"), "axis2_min"), parse_int(need("axis2_max"), "axis2_max")};
  std::vector<cplx> cells(r1.size() * r2.size());
  for (const auto& [pos, value] : rows) {
    if (!r1.contains(pos.first) || !r2.contains(pos.second)) throw ValidationError("CSV row outside declared ranges");
    cells[static_cast<std::size_t>(pos.first - r1.lo) * r2.size() + static_cast<std::size_t>(pos.second - r2.lo)] =
        value;
  }
  return {parse_axis_kind(need("axis1_kind")), r1, parse_axis_kind(need("axis2_kind")), r2, std::move(cells),
          std::move(meta)};
}

void write_grid_json(const JointAmplitudeGrid& grid, std::ostream& out) {
  // Numbers go through format_real so the JSON carries the same digits as
  // the CSV; nlohmann's default shortest round-trip printing would differ.
  const Interval r1 = grid.axis1_range();
  const Interval r2 = grid.axis2_range();
  nlohmann::ordered_json meta = nlohmann::ordered_json::object();
  for (const auto& [k, v] : grid.metadata()) meta[k] = v;
  out << "{\n"
      << "  \"axis1_kind\": \"" << axis_kind_name(grid.axis1_kind()) << "\",\n"
      << "  \"axis1_min\": " << r1.lo << ",\n"
      << "  \"axis1_max\": " << r1.hi << ",\n"
      << "  \"axis2_kind\": \"" << axis_kind_name(grid.axis2_kind()) << "\",\n"
      << "  \"axis2_min\": " << r2.lo << ",\n"
      << "  \"axis2_max\": " << r2.hi << ",\n"
      << "  \"metadata\": " << meta.dump() << ",\n"
      << "  \"cells\": [";
  bool first = true;
  auto num = [](double v) { return format_real(v); };
  for (int v1 = r1.lo; v1 <= r1.hi; ++v1) {
    for (int v2 = r2.lo; v2 <= r2.hi; ++v2) {
      const cplx c = grid.at(v1, v2);
      out << (first ? "\n" : ",\n") << "    {\"axis1\": " << v1 << ", \"axis2\": " << v2 << ", \"re\": "
          << num(c.real()) << ", \"im\": " << num(c.imag()) << ", \"prob\": " << num(std::norm(c)) << '}';
      first = false;
    }
  }
  out << "\n  ]\n}\n";
}

JointAmplitudeGrid read_grid_json(std::istream& in) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed grid JSON: ") + e.what());
  }
  try {
    const Interval r1{doc.at("axis1_min").get<int>(), doc.at("axis1_max").get<int>()};
    const Interval r2{doc.at("axis2_min").get<int>(), doc.at("axis2_max").get<int>()};
    std::vector<cplx> cells(r1.size() * r2.size());
    for (const auto& cell : doc.at("cells")) {
      const int v1 = cell.at("axis1").get<int>();
      const int v2 = cell.at("axis2").get<int>();
      if (!r1.contains(v1) || !r2.contains(v2)) throw ValidationError("JSON cell outside declared ranges");
      cells[static_cast<std::size_t>(v1 - r1.lo) * r2.size() + static_cast<std::size_t>(v2 - r2.lo)] =
          cplx(cell.at("re").get<double>(), cell.at("im").get<double>());
    }
    Metadata meta;
    for (const auto& [k, v] : doc.at("metadata").items()) meta.emplace_back(k, v.get<std::string>());
    return {parse_axis_kind(doc.at("axis1_kind").get<std::string>()), r1,
            parse_axis_kind(doc.at("axis2_kind").get<std::string>()), r2, std::move(cells), std::move(meta)};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("grid JSON is missing fields: ") + e.what());
  }
}

} // namespace qew
