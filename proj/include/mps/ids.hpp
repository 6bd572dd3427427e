#pragma once

#include <compare>
#include <functional>
#include <ostream>
#include <string>

namespace mps {

/// Opaque identifier of a call. Lexicographic order on the underlying
/// string is the canonical order used for all deterministic output.
struct CallId {
    std::string id;

    CallId() = default;
    explicit CallId(std::string s) : id(std::move(s)) {}

    auto operator<=>(const CallId&) const = default;
};

/// Opaque identifier of a contract.
struct ContractId {
    std::string id;

    ContractId() = default;
    explicit ContractId(std::string s) : id(std::move(s)) {}

    auto operator<=>(const ContractId&) const = default;
};

inline std::ostream& operator<<(std::ostream& os, const CallId& c) { return os << c.id; }
inline std::ostream& operator<<(std::ostream& os, const ContractId& x) { return os << x.id; }

}  // namespace mps

template <>
struct std::hash<mps::CallId> {
    std::size_t operator()(const mps::CallId& c) const noexcept {
        return std::hash<std::string>{}(c.id);
    }
};

template <>
struct std::hash<mps::ContractId> {
    std::size_t operator()(const mps::ContractId& x) const noexcept {
        return std::hash<std::string>{}(x.id);
    }
};
