// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace spp {

/// How the elements of an instance are interpreted: as a set of distinct item
/// ids (order-free, stored strictly increasing) or as an ordered token string.
enum class StructureKind { itemset, sequence };

std::string to_string(StructureKind kind);
StructureKind structure_from_string(const std::string& name);

/// One labeled structured instance. For itemsets `elements` is strictly
/// increasing; for sequences it is the token string in order (repeats allowed).
struct Instance {
    double label = 0.0;
    std::vector<int32_t> elements;
};

/// Error raised by dataset parsing/validation; carries a 1-based line number
/// when the problem is tied to a specific input line (0 otherwise).
class DatasetError : public std::runtime_error {
public:
    DatasetError(std::string message, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + std::move(message)
                                  : std::move(message)),
          line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// An immutable collection of labeled instances sharing one structure kind.
struct Dataset {
    StructureKind kind = StructureKind::itemset;
    std::vector<Instance> instances;
    int32_t alphabet = 0;  // max element id + 1 over all instances

    std::size_t size() const { return instances.size(); }
    std::vector<double> labels() const;
};

/// Parse the plain-text format: one instance per line, `<label> <id> <id> ...`,
/// blank lines and `#` comments skipped. Itemset element lists must be strictly
/// increasing (duplicates and misordered ids are rejected with a line number).
Dataset load_dataset(std::istream& in, StructureKind kind);
Dataset load_dataset_file(const std::string& path, StructureKind kind);

/// Serialize in the exact format accepted by load_dataset (round-trips).
void save_dataset(const Dataset& data, std::ostream& out);

/// Require labels to be exactly +1/-1 (classification losses). Throws
/// DatasetError naming the first offending instance otherwise.
void require_binary_labels(const Dataset& data);

}  // namespace spp
