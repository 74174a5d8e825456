#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "mems/evolution.hpp"
#include "mems/plate.hpp"
#include "mems/stationary.hpp"

namespace mems {

class IoError : public Error {
 public:
  using Error::Error;
};

/// 17 significant digits; non-finite values as nan/inf.
std::string format_number(double x);

/// Flat JSON object with keys in insertion order.
class JsonObject {
 public:
  JsonObject& add(const std::string& key, double value);
  JsonObject& add(const std::string& key, int value);
  JsonObject& add(const std::string& key, bool value);
  JsonObject& add(const std::string& key, const std::string& value);
  JsonObject& add(const std::string& key, const char* value) { return add(key, std::string(value)); }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Header "r,<column>".
void write_field_csv(std::ostream& out, const PlateField& u, const std::string& column = "u");

/// Reads a two-column r,value CSV with a header row.
std::pair<Vector, Vector> read_field_csv(std::istream& in);

/// Header "lambda,u_min,iters,converged".
void write_trace_csv(std::ostream& out, const ContinuationTrace& trace);

/// Header "t,u_min,error,energy".
void write_evolution_csv(std::ostream& out, const EvolutionTrace& trace);

/// Writes content to path, throwing IoError on failure.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace mems
