#pragma once

#include <algorithm>
#include <initializer_list>
#include <string>
#include <vector>

#include "entcert/errors.hpp"

namespace entcert {

// Tensor-factor layout of a multipartite operator. Party 0 is the most
// significant digit of a basis index:
//   index(a_0,...,a_{N-1}) = ((a_0 * d_1 + a_1) * d_2 + a_2) * ...
// which matches kron(A_0, A_1, ..., A_{N-1}) ordering.
struct SystemShape {
    std::vector<int> local_dims;

    int num_parties() const { return static_cast<int>(local_dims.size()); }

    long dim() const {
        long d = 1;
        for (int k : local_dims) d *= k;
        return d;
    }

    bool all_qubits() const {
        return std::all_of(local_dims.begin(), local_dims.end(), [](int d) { return d == 2; });
    }

    void validate() const {
        if (local_dims.empty()) throw ValidationError("SystemShape: at least one party required");
        for (int d : local_dims)
            if (d < 2) throw ValidationError("SystemShape: local dimensions must be >= 2");
    }

    // Per-party index strides for mixed-radix (de)composition.
    std::vector<long> strides() const {
        const int n = num_parties();
        std::vector<long> s(n);
        long acc = 1;
        for (int p = n - 1; p >= 0; --p) {
            s[p] = acc;
            acc *= local_dims[p];
        }
        return s;
    }

    static SystemShape qubits(int n) { return SystemShape{std::vector<int>(n, 2)}; }
    static SystemShape qudits(int n, int d) { return SystemShape{std::vector<int>(n, d)}; }

    bool operator==(const SystemShape& other) const { return local_dims == other.local_dims; }
    bool operator!=(const SystemShape& other) const { return !(*this == other); }
};

// A set of party indices. The empty subset is allowed and acts as identity.
struct PartySubset {
    std::vector<int> indices;  // kept sorted and unique

    PartySubset() = default;
    PartySubset(std::initializer_list<int> list) : indices(list) { normalize(); }
    explicit PartySubset(std::vector<int> list) : indices(std::move(list)) { normalize(); }

    static PartySubset single(int p) { return PartySubset{p}; }

    static PartySubset all(int n_parties) {
        PartySubset s;
        s.indices.resize(n_parties);
        for (int i = 0; i < n_parties; ++i) s.indices[i] = i;
        return s;
    }

    // First floor(N/2) parties; the bipartition used by the Hankel criteria.
    static PartySubset half_chain(int n_parties) {
        PartySubset s;
        for (int i = 0; i < n_parties / 2; ++i) s.indices.push_back(i);
        return s;
    }

    PartySubset complement(int n_parties) const {
        PartySubset s;
        for (int i = 0; i < n_parties; ++i)
            if (!contains(i)) s.indices.push_back(i);
        return s;
    }

    bool contains(int p) const {
        return std::binary_search(indices.begin(), indices.end(), p);
    }

    bool empty() const { return indices.empty(); }
    int size() const { return static_cast<int>(indices.size()); }

    void validate_for(const SystemShape& shape) const {
        for (int p : indices)
            if (p < 0 || p >= shape.num_parties())
                throw ArgumentError("PartySubset: party index " + std::to_string(p) +
                                    " out of range for " + std::to_string(shape.num_parties()) +
                                    " parties");
    }

    std::string to_string() const {
        std::string out = "{";
        for (size_t i = 0; i < indices.size(); ++i) {
            if (i) out += ",";
            out += std::to_string(indices[i]);
        }
        return out + "}";
    }

    bool operator==(const PartySubset& other) const { return indices == other.indices; }

private:
    void normalize() {
        std::sort(indices.begin(), indices.end());
        indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    }
};

}  // namespace entcert
