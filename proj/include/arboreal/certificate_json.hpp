#pragma once

// Canonical JSON form of a LowerBoundCertificate and the detached verifier.

#include <string>
#include <vector>

#include "arboreal/certify.hpp"

namespace arboreal {

inline constexpr const char* kCertificateFormat = "arboreal-certificate/1";

/// Two-space indented, fixed key order, trailing newline.
std::string certificate_to_json(const LowerBoundCertificate& cert);

struct CertificateCheck {
    bool byte_identical = false;  // input text equals the re-derived document
    std::vector<std::string> differences;  // JSON pointers, empty when the content matches
};

/// Re-derives the certificate from its header (d, c, alpha, seed and limits)
/// and compares. InvalidArgument on a malformed document, FalsificationError
/// when any stored value disagrees with the recomputation.
CertificateCheck verify_certificate_json(const std::string& text);

}  // namespace arboreal
