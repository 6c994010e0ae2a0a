#pragma once

#include "quadagg/certsearch.hpp"
#include "quadagg/hull.hpp"
#include "quadagg/types.hpp"

#include <filesystem>
#include <map>
#include <string>

namespace quadagg {

/// Malformed input documents (distinct from solver failures).
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// Shortest text that round-trips the double: 17 significant digits.
std::string format_double(double v);

/// Instance document: {"n": ..., "sense": "strict"|"nonstrict",
/// "constraints": [{"A": row-major k*k numbers, "b": [...], "c": ...}, ...]}.
/// Matrices symmetrize by transpose-averaging; relative asymmetry beyond
/// 1e-12 is a load error.
QuadSystem parse_quad_system(const std::string& text);
QuadSystem load_quad_system(const std::filesystem::path& path);
std::string to_instance_text(const QuadSystem& sys);

/// Certificate envelope: {"certificate": {"kind": ..., ...}}.
std::string to_certificate_text(const PdlcWitness& w);
std::string to_certificate_text(const DualWitness& w);
std::string to_certificate_text(const PsdCombination& c);
std::string to_certificate_text(const FarkasCertificate& c);
std::string to_certificate_text(const SeparationCertificate& c);
std::string to_certificate_text(const Weights& w);
std::string inconclusive_certificate_text(const std::string& diagnostics);

/// Parsed envelope with the kind tag and the numeric payloads needed to
/// re-verify a certificate against raw instance data.
struct CertificateEnvelope {
  std::string kind;
  std::map<std::string, std::vector<double>> fields;  // numeric payloads by name
  std::string raw;  // original text for byte-identical round trips
};
CertificateEnvelope parse_certificate(const std::string& text);

/// One point per line, space-separated coordinates, 17 significant digits.
std::string to_point_cloud_text(const std::vector<Vector>& points);

/// Write via temp file + rename so readers never observe partial output.
void atomic_write(const std::filesystem::path& path, const std::string& content);

}  // namespace quadagg
