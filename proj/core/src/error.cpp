#include "reveuler/error.hpp"

namespace reveuler {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "ValidationError";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::InsufficientSamples: return "InsufficientSamples";
    case ErrorKind::QuadratureNonConvergent: return "QuadratureNonConvergent";
    case ErrorKind::ZeroTime: return "ZeroTime";
    case ErrorKind::InsufficientSlab: return "InsufficientSlab";
    case ErrorKind::MissingDerivative: return "MissingDerivative";
    case ErrorKind::NonFiniteField: return "NonFiniteField";
    case ErrorKind::NoContraction: return "NoContraction";
    case ErrorKind::NotCauchy: return "NotCauchy";
    case ErrorKind::CertificateMissing: return "CertificateMissing";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace reveuler
