#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "nullfield/flow.hpp"

namespace nullfield {

namespace {

template <int Dim>
void write_rows(std::ostream& os, const Curve<Dim>& c, const char* header) {
  os << header << '\n';
  char buf[64];
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", c.params[i]);
    os << buf;
    for (int k = 0; k < Dim; ++k) {
      std::snprintf(buf, sizeof buf, ",%.17g", c.points[i][k]);
      os << buf;
    }
    os << '\n';
  }
}

template <int Dim>
Curve<Dim> read_rows(std::istream& is, const std::string& header) {
  std::string line;
  if (!std::getline(is, line)) {
    throw std::runtime_error("curve csv: empty input");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != header) {
    throw std::runtime_error("curve csv: expected header '" + header + "', got '" + line + "'");
  }
  Curve<Dim> c;
  c.closed = true;
  std::size_t row = 1;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty() || line == "\r") {
      continue;
    }
    std::stringstream ss(line);
    std::string cell;
    double vals[Dim + 1];
    int k = 0;
    while (std::getline(ss, cell, ',')) {
      if (k > Dim) {
        break;
      }
      std::size_t used = 0;
      try {
        vals[k] = std::stod(cell, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used == 0) {
        throw std::runtime_error("curve csv: malformed number on row " + std::to_string(row));
      }
      ++k;
    }
    if (k != Dim + 1 || std::getline(ss, cell, ',')) {
      throw std::runtime_error("curve csv: wrong column count on row " + std::to_string(row));
    }
    c.params.push_back(vals[0]);
    typename Curve<Dim>::Point p;
    for (int j = 0; j < Dim; ++j) {
      p[j] = vals[j + 1];
    }
    c.points.push_back(p);
  }
  return c;
}

} // namespace

void write_curve_csv(std::ostream& os, const SphereCurve& c) {
  write_rows(os, c, "param,x1,y1,x2,y2");
}

void write_curve_csv(std::ostream& os, const SpaceCurve& c) { write_rows(os, c, "param,x,y,z"); }

SphereCurve read_sphere_curve_csv(std::istream& is) {
  return read_rows<4>(is, "param,x1,y1,x2,y2");
}

SpaceCurve read_space_curve_csv(std::istream& is) { return read_rows<3>(is, "param,x,y,z"); }

} // namespace nullfield
