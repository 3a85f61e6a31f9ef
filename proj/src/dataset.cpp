// SPDX-License-Identifier: Apache-2.0
#include "spp/dataset.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace spp {

std::string to_string(StructureKind kind) {
    return kind == StructureKind::itemset ? "itemset" : "sequence";
}

StructureKind structure_from_string(const std::string& name) {
    if (name == "itemset") return StructureKind::itemset;
    if (name == "sequence") return StructureKind::sequence;
    throw DatasetError("unknown structure kind '" + name + "' (expected itemset or sequence)");
}

std::vector<double> Dataset::labels() const {
    std::vector<double> y;
    y.reserve(instances.size());
    for (const auto& inst : instances) y.push_back(inst.label);
    return y;
}

Dataset load_dataset(std::istream& in, StructureKind kind) {
    Dataset data;
    data.kind = kind;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments and surrounding whitespace
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string token;
        if (!(row >> token)) continue;  // blank or comment-only line

        Instance inst;
        try {
            std::size_t used = 0;
            inst.label = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw DatasetError("malformed label '" + token + "'", lineno);
        }
        if (!std::isfinite(inst.label)) throw DatasetError("non-finite label", lineno);

        while (row >> token) {
            long value = 0;
            try {
                std::size_t used = 0;
                value = std::stol(token, &used);
                if (used != token.size()) throw std::invalid_argument(token);
            } catch (const std::exception&) {
                throw DatasetError("malformed element id '" + token + "'", lineno);
            }
            if (value < 0 || value > std::numeric_limits<int32_t>::max())
                throw DatasetError("element id out of range: " + token, lineno);
            if (kind == StructureKind::itemset && !inst.elements.empty()) {
                if (value == inst.elements.back())
                    throw DatasetError("duplicate item id " + token + " in itemset", lineno);
                if (value < inst.elements.back())
                    throw DatasetError("itemset ids must be strictly increasing (saw " + token +
                                           " after " + std::to_string(inst.elements.back()) + ")",
                                       lineno);
            }
            inst.elements.push_back(static_cast<int32_t>(value));
            if (value + 1 > data.alphabet) data.alphabet = static_cast<int32_t>(value + 1);
        }
        data.instances.push_back(std::move(inst));
    }
    if (data.instances.empty()) throw DatasetError("dataset is empty");
    return data;
}

Dataset load_dataset_file(const std::string& path, StructureKind kind) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset file: " + path);
    try {
        return load_dataset(in, kind);
    } catch (const DatasetError& e) {
        throw DatasetError(path + ": " + e.what(), 0);
    }
}

void save_dataset(const Dataset& data, std::ostream& out) {
    out.precision(17);
    for (const auto& inst : data.instances) {
        out << inst.label;
        for (int32_t e : inst.elements) out << ' ' << e;
        out << '\n';
    }
}

void require_binary_labels(const Dataset& data) {
    for (std::size_t i = 0; i < data.instances.size(); ++i) {
        double y = data.instances[i].label;
        if (y != 1.0 && y != -1.0)
            throw DatasetError("classification labels must be exactly +1 or -1; instance " +
                               std::to_string(i + 1) + " has label " + std::to_string(y));
    }
}

}  // namespace spp
