#include "quadagg/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace quadagg {

using nlohmann::json;

std::string format_double(double v) {
  if (v == 0.0) return "0";  // canonical zero; JSON has no signed zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string format_vector(const Vector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v(i));
  }
  out += "]";
  return out;
}

std::string format_matrix_rowmajor(const Matrix& m) {
  std::string out = "[";
  bool first = true;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (!first) out += ", ";
      out += format_double(m(i, j));
      first = false;
    }
  }
  out += "]";
  return out;
}

Matrix matrix_from_json(const json& j, int expected_order) {
  const int k = expected_order;
  Matrix m(k, k);
  if (j.is_array() && !j.empty() && j.front().is_array()) {
    if (static_cast<int>(j.size()) != k) throw IoError("matrix row count mismatch");
    for (int i = 0; i < k; ++i) {
      if (static_cast<int>(j[i].size()) != k) throw IoError("matrix column count mismatch");
      for (int c = 0; c < k; ++c) m(i, c) = j[i][c].get<double>();
    }
  } else if (j.is_array()) {
    if (static_cast<int>(j.size()) != k * k) {
      throw IoError("matrix must hold k*k numbers in row-major order");
    }
    for (int i = 0; i < k; ++i) {
      for (int c = 0; c < k; ++c) m(i, c) = j[i * k + c].get<double>();
    }
  } else {
    throw IoError("matrix field must be an array");
  }
  if (!m.allFinite()) throw IoError("matrix entries must be finite");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw IoError("matrix asymmetry exceeds 1e-12 relative");
  }
  return 0.5 * (m + m.transpose());
}

}  // namespace

QuadSystem parse_quad_system(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("instance parse failure: ") + e.what());
  }
  try {
    if (!doc.contains("n") || !doc.contains("sense") || !doc.contains("constraints")) {
      throw IoError("instance requires fields n, sense, constraints");
    }
    const int n = doc["n"].get<int>();
    if (n < 1) throw IoError("n must be positive");
    const std::string senseText = doc["sense"].get<std::string>();
    Sense sense;
    if (senseText == "strict") {
      sense = Sense::Strict;
    } else if (senseText == "nonstrict") {
      sense = Sense::Nonstrict;
    } else {
      throw IoError("sense must be 'strict' or 'nonstrict'");
    }
    if (!doc["constraints"].is_array() || doc["constraints"].empty()) {
      throw IoError("constraints must be a nonempty array");
    }
    std::vector<QuadConstraint> constraints;
    for (const auto& jc : doc["constraints"]) {
      const Matrix a = matrix_from_json(jc.at("A"), n);
      const auto& jb = jc.at("b");
      if (static_cast<int>(jb.size()) != n) throw IoError("b must have length n");
      Vector b(n);
      for (int i = 0; i < n; ++i) b(i) = jb[i].get<double>();
      const double c = jc.at("c").get<double>();
      constraints.emplace_back(SymMatrix(a), b, c, sense);
    }
    return QuadSystem(n, std::move(constraints));
  } catch (const json::exception& e) {
    throw IoError(std::string("instance structure failure: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw IoError(std::string("instance validation failure: ") + e.what());
  }
}

QuadSystem load_quad_system(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open instance file: " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_quad_system(ss.str());
}

std::string to_instance_text(const QuadSystem& sys) {
  std::string out = "{\n";
  out += "  \"n\": " + std::to_string(sys.n) + ",\n";
  out += std::string("  \"sense\": \"") + to_string(sys.sense()) + "\",\n";
  out += "  \"constraints\": [\n";
  for (int i = 0; i < sys.m(); ++i) {
    const auto& q = sys.constraints[i];
    out += "    {\"A\": " + format_matrix_rowmajor(q.A.mat());
    out += ", \"b\": " + format_vector(q.b);
    out += ", \"c\": " + format_double(q.c) + "}";
    out += i + 1 < sys.m() ? ",\n" : "\n";
  }
  out += "  ]\n}\n";
  return out;
}

namespace {

std::string envelope(const std::string& kind, const std::string& body) {
  return "{\"certificate\": {\"kind\": \"" + kind + "\"" + body + "}}\n";
}

}  // namespace

std::string to_certificate_text(const PdlcWitness& w) {
  return envelope("pdlc-witness", ", \"theta\": " + format_vector(w.theta) +
                                      ", \"margin\": " + format_double(w.margin));
}

std::string to_certificate_text(const DualWitness& w) {
  return envelope("dual-witness",
                  ", \"order\": " + std::to_string(w.W.order()) +
                      ", \"W\": " + format_matrix_rowmajor(w.W.mat()) +
                      ", \"inner_products\": " + format_vector(w.inner_products) +
                      ", \"trace\": " + format_double(w.trace));
}

std::string to_certificate_text(const PsdCombination& c) {
  return envelope("psd-combination", ", \"lambda\": " + format_vector(c.lambda) +
                                         ", \"margin\": " + format_double(c.margin));
}

std::string to_certificate_text(const FarkasCertificate& c) {
  return envelope("farkas",
                  ", \"multipliers\": " + format_vector(c.multipliers) +
                      ", \"derived_coeffs\": " + format_vector(c.derived_coeffs) +
                      ", \"derived_rhs\": " + format_double(c.derived_rhs) +
                      std::string(", \"derived_strict\": ") +
                      (c.derived_strict ? "true" : "false"));
}

std::string to_certificate_text(const SeparationCertificate& c) {
  std::string body = ", \"alpha\": " + format_vector(c.alpha);
  body += ", \"beta\": " + format_double(c.beta);
  body += ", \"lambda\": " + format_vector(c.lambda.values);
  body += ", \"checks\": {\"excludes_query\": ";
  body += c.checks.excludes_query ? "true" : "false";
  body += ", \"nu_at_most_one\": ";
  body += c.checks.nu_at_most_one ? "true" : "false";
  body += ", \"contains_samples\": ";
  body += c.checks.contains_samples ? "true" : "false";
  body += "}";
  return envelope("separation", body);
}

std::string to_certificate_text(const Weights& w) {
  return envelope("aggregation-weights",
                  ", \"lambda\": " + format_vector(w.values) + std::string(", \"signed\": ") +
                      (w.is_signed ? "true" : "false"));
}

std::string inconclusive_certificate_text(const std::string& diagnostics) {
  json j = diagnostics;  // reuse the library's string escaping
  return envelope("no-witness-found", ", \"diagnostics\": " + j.dump());
}

namespace {

void collect_numbers(const json& j, std::vector<double>& out) {
  if (j.is_number()) {
    out.push_back(j.get<double>());
  } else if (j.is_array()) {
    for (const auto& e : j) collect_numbers(e, out);
  } else if (j.is_object()) {
    for (const auto& [key, value] : j.items()) collect_numbers(value, out);
  }
}

}  // namespace

CertificateEnvelope parse_certificate(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("certificate parse failure: ") + e.what());
  }
  if (!doc.contains("certificate") || !doc["certificate"].contains("kind")) {
    throw IoError("certificate envelope requires certificate.kind");
  }
  CertificateEnvelope env;
  env.kind = doc["certificate"]["kind"].get<std::string>();
  env.raw = text;
  for (const auto& [key, value] : doc["certificate"].items()) {
    if (key == "kind") continue;
    std::vector<double> numbers;
    collect_numbers(value, numbers);
    if (!numbers.empty()) env.fields[key] = std::move(numbers);
  }
  return env;
}

std::string to_point_cloud_text(const std::vector<Vector>& points) {
  std::string out;
  for (const Vector& p : points) {
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      if (i) out += " ";
      out += format_double(p(i));
    }
    out += "\n";
  }
  return out;
}

void atomic_write(const std::filesystem::path& path, const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << content;
    if (!out) throw IoError("write failure: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace quadagg
