#include "conediff/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace conediff::io {
namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

const Json& field(const Json& j, const std::string& key,
                  const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(join(path, key), "missing field");
  return *it;
}

int read_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ParseError(path, "expected an integer");
  return j.get<int>();
}

Vector read_vector(const Json& j, const std::string& path,
                   Eigen::Index expected = -1) {
  if (!j.is_array()) throw ParseError(path, "expected an array of numbers");
  if (expected >= 0 && static_cast<Eigen::Index>(j.size()) != expected) {
    throw ParseError(path, "expected length " + std::to_string(expected) +
                               ", got " + std::to_string(j.size()));
  }
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) {
      throw ParseError(path + "[" + std::to_string(i) + "]",
                       "expected a number");
    }
    v[i] = j[i].get<double>();
  }
  return v;
}

std::vector<int> read_indices(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of integers");
  std::vector<int> out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out[i] = read_int(j[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

std::vector<int> read_sizes(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ParseError(path, "expected an array of sizes");
  std::vector<int> out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    out[i] = read_int(j[i], at);
    if (out[i] < 1) throw ParseError(at, "cone size must be >= 1");
  }
  return out;
}

}  // namespace

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), "cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ParseError(path.string(), e.what());
  }
}

Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

ConeSpec cones_from_json(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    if (key != "zero" && key != "nonneg" && key != "soc" && key != "psd") {
      throw ParseError(join(path, key), "unknown cone kind");
    }
  }
  auto count = [&](const char* key) {
    if (!j.contains(key)) return 0;
    const int v = read_int(j[key], join(path, key));
    if (v < 0) throw ParseError(join(path, key), "must be >= 0");
    return v;
  };
  auto sizes = [&](const char* key) {
    return j.contains(key) ? read_sizes(j[key], join(path, key))
                           : std::vector<int>{};
  };
  return ConeSpec(count("zero"), count("nonneg"), sizes("soc"), sizes("psd"));
}

Json cones_to_json(const ConeSpec& spec) {
  return Json{{"zero", spec.zero()},
              {"nonneg", spec.nonneg()},
              {"soc", spec.soc()},
              {"psd", spec.psd()}};
}

ConeProgramData problem_from_json(const Json& j) {
  const int m = read_int(field(j, "m", ""), "m");
  const int n = read_int(field(j, "n", ""), "n");
  if (m < 1 || n < 1) throw ParseError("m", "m and n must be >= 1");
  const Json& a = field(j, "A", "");
  std::vector<int> rows = read_indices(field(a, "rows", "A"), "A.rows");
  std::vector<int> cols = read_indices(field(a, "cols", "A"), "A.cols");
  Vector vals = read_vector(field(a, "vals", "A"), "A.vals");
  if (rows.size() != cols.size() ||
      rows.size() != static_cast<std::size_t>(vals.size())) {
    throw ParseError("A", "rows, cols and vals must have equal lengths");
  }
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= m) {
      throw ParseError("A.rows[" + std::to_string(k) + "]", "out of range");
    }
    if (cols[k] < 0 || cols[k] >= n) {
      throw ParseError("A.cols[" + std::to_string(k) + "]", "out of range");
    }
  }
  Vector b = read_vector(field(j, "b", ""), "b", m);
  Vector c = read_vector(field(j, "c", ""), "c", n);
  ConeSpec cones = cones_from_json(field(j, "cones", ""), "cones");
  if (cones.dimension() != m) {
    throw ParseError("cones", "total dimension " +
                                  std::to_string(cones.dimension()) +
                                  " does not match m = " + std::to_string(m));
  }
  try {
    return ConeProgramData(
        SparseMatrix(m, n, std::move(rows), std::move(cols), std::move(vals)),
        std::move(b), std::move(c), std::move(cones));
  } catch (const ParseError&) {
    throw;
  } catch (const InputError& e) {
    throw ParseError("A", e.what());
  }
}

Json problem_to_json(const ConeProgramData& data) {
  return Json{{"m", data.m()},
              {"n", data.n()},
              {"A",
               {{"rows", data.A().row_indices()},
                {"cols", data.A().col_indices()},
                {"vals", vector_to_json(data.A().values())}}},
              {"b", vector_to_json(data.b())},
              {"c", vector_to_json(data.c())},
              {"cones", cones_to_json(data.cones())}};
}

Json solution_to_json(const Solution& sol) {
  return Json{{"x", vector_to_json(sol.x)},
              {"y", vector_to_json(sol.y)},
              {"s", vector_to_json(sol.s)},
              {"z", vector_to_json(sol.z.vector())},
              {"status", std::string(to_string(sol.status))},
              {"iterations", sol.iterations},
              {"residuals",
               {{"primal", sol.residuals.primal},
                {"dual", sol.residuals.dual},
                {"gap", sol.residuals.gap},
                {"objective_gap", sol.residuals.objective_gap},
                {"residual_map", sol.residual_map_norm}}}};
}

SolutionTriple solution_triple_from_json(const Json& j,
                                         const ConeProgramData& data) {
  return {read_vector(field(j, "x", ""), "x", data.n()),
          read_vector(field(j, "y", ""), "y", data.m()),
          read_vector(field(j, "s", ""), "s", data.m())};
}

ProgramPerturbation program_perturbation_from_json(
    const Json& j, const ConeProgramData& data) {
  ProgramPerturbation p;
  p.dA = Vector::Zero(data.A().nnz());
  p.db = Vector::Zero(data.m());
  p.dc = Vector::Zero(data.n());
  if (!j.is_object()) throw ParseError("", "expected an object");

  if (j.contains("dA")) {
    const Json& da = j["dA"];
    Vector vals = read_vector(field(da, "vals", "dA"), "dA.vals");
    if (da.contains("rows") || da.contains("cols")) {
      const auto rows = read_indices(field(da, "rows", "dA"), "dA.rows");
      const auto cols = read_indices(field(da, "cols", "dA"), "dA.cols");
      if (rows.size() != cols.size() ||
          rows.size() != static_cast<std::size_t>(vals.size())) {
        throw ParseError("dA", "rows, cols and vals must have equal lengths");
      }
      for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto pos = data.A().find(rows[k], cols[k]);
        if (!pos) {
          throw ParseError("dA[" + std::to_string(k) + "]",
                           "entry (" + std::to_string(rows[k]) + ", " +
                               std::to_string(cols[k]) +
                               ") is outside the sparsity pattern of A");
        }
        p.dA[*pos] += vals[k];
      }
    } else {
      if (vals.size() != data.A().nnz()) {
        throw ParseError("dA.vals",
                         "expected " + std::to_string(data.A().nnz()) +
                             " values in pattern order, got " +
                             std::to_string(vals.size()));
      }
      p.dA = std::move(vals);
    }
  }
  if (j.contains("db")) p.db = read_vector(j["db"], "db", data.m());
  if (j.contains("dc")) p.dc = read_vector(j["dc"], "dc", data.n());
  return p;
}

Json program_perturbation_to_json(const ProgramPerturbation& p,
                                  const ConeProgramData& data) {
  return Json{{"dA",
               {{"rows", data.A().row_indices()},
                {"cols", data.A().col_indices()},
                {"vals", vector_to_json(p.dA)}}},
              {"db", vector_to_json(p.db)},
              {"dc", vector_to_json(p.dc)}};
}

SolutionPerturbation solution_perturbation_from_json(
    const Json& j, const ConeProgramData& data) {
  if (!j.is_object()) throw ParseError("", "expected an object");
  SolutionPerturbation q{Vector::Zero(data.n()), Vector::Zero(data.m()),
                         Vector::Zero(data.m())};
  if (j.contains("dx")) q.dx = read_vector(j["dx"], "dx", data.n());
  if (j.contains("dy")) q.dy = read_vector(j["dy"], "dy", data.m());
  if (j.contains("ds")) q.ds = read_vector(j["ds"], "ds", data.m());
  return q;
}

Json solution_perturbation_to_json(const SolutionPerturbation& q) {
  return Json{{"dx", vector_to_json(q.dx)},
              {"dy", vector_to_json(q.dy)},
              {"ds", vector_to_json(q.ds)}};
}

Json report_to_json(const GradientCheckReport& report) {
  Json coords = Json::array();
  for (const auto& c : report.coordinates) {
    Json entry{{"part", std::string(to_string(c.part))},
               {"index", c.index},
               {"skipped", c.skipped}};
    entry["rel_error"] =
        c.skipped ? Json(nullptr) : Json(c.rel_error);
    coords.push_back(std::move(entry));
  }
  return Json{{"samples", report.samples},
              {"skipped", report.skipped},
              {"step", report.step},
              {"max_rel_error", report.max_rel_error},
              {"coordinates", std::move(coords)}};
}

}  // namespace conediff::io
