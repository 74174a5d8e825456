#include "mems/io.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <sstream>

namespace mems {
namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"':
        out += "\\\"";
        break;
      case '\\':
        out += "\\\\";
        break;
      case '\n':
        out += "\\n";
        break;
      default:
        out += c;
    }
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", x);
}

JsonObject& JsonObject::add(const std::string& key, double value) {
  entries_.emplace_back(key, std::isfinite(value) ? format_number(value) : std::string("null"));
  return *this;
}

JsonObject& JsonObject::add(const std::string& key, int value) {
  entries_.emplace_back(key, std::to_string(value));
  return *this;
}

JsonObject& JsonObject::add(const std::string& key, bool value) {
  entries_.emplace_back(key, value ? "true" : "false");
  return *this;
}

JsonObject& JsonObject::add(const std::string& key, const std::string& value) {
  entries_.emplace_back(key, quote(value));
  return *this;
}

std::string JsonObject::str() const {
  std::string out = "{\n";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    out += "  " + quote(entries_[i].first) + ": " + entries_[i].second;
    out += i + 1 < entries_.size() ? ",\n" : "\n";
  }
  return out + "}\n";
}

void write_field_csv(std::ostream& out, const PlateField& u, const std::string& column) {
  out << "r," << column << '\n';
  const RadialGrid& g = *u.grid;
  for (int i = 0; i < g.size(); ++i) out << format_number(g.r(i)) << ',' << format_number(u.values[i]) << '\n';
}

std::pair<Vector, Vector> read_field_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("read_field_csv: empty input");
  std::vector<double> r, v;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw IoError(fmt::format("read_field_csv: line {}: expected two columns", lineno));
    try {
      std::size_t used = 0;
      const std::string a = line.substr(0, comma);
      const std::string b = line.substr(comma + 1);
      r.push_back(std::stod(a, &used));
      v.push_back(std::stod(b, &used));
      if (used != b.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw IoError(fmt::format("read_field_csv: line {}: malformed number", lineno));
    }
  }
  return {Eigen::Map<Vector>(r.data(), r.size()), Eigen::Map<Vector>(v.data(), v.size())};
}

void write_trace_csv(std::ostream& out, const ContinuationTrace& trace) {
  out << "lambda,u_min,iters,converged\n";
  for (const auto& rec : trace.records) {
    out << format_number(rec.lambda) << ',' << format_number(rec.u_min) << ',' << rec.iterations << ','
        << (rec.converged ? 1 : 0) << '\n';
  }
}

void write_evolution_csv(std::ostream& out, const EvolutionTrace& trace) {
  out << "t,u_min,error,energy\n";
  for (std::size_t k = 0; k < trace.times.size(); ++k) {
    const double e = k < trace.error.size() ? trace.error[k] : std::nan("");
    const double en = k < trace.energy.size() ? trace.energy[k] : std::nan("");
    out << format_number(trace.times[k]) << ',' << format_number(trace.u_min[k]) << ',' << format_number(e) << ','
        << format_number(en) << '\n';
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open {} for writing", path));
  f << content;
  if (!f) throw IoError(fmt::format("write to {} failed", path));
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(fmt::format("cannot open {} for reading", path));
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace mems
