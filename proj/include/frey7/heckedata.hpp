#pragma once

// Ingestion, validation and structural analysis of newform eigenvalue data
// (classical over Q, Hilbert over K): the JSON schema, the K ⊂ K_g filter,
// Galois action on forms, chi_7 twist pairing, base-change detection, and
// synthetic records computed from Frey objects for soundness tests.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "frey7/frey.hpp"
#include "frey7/traces.hpp"

namespace frey7 {

struct PrimeKey {
    std::uint64_t q = 0;
    int f = 1;
    std::optional<std::uint64_t> root;  // split primes of K; nullopt over Q / inert

    auto operator<=>(const PrimeKey&) const = default;
    static PrimeKey of(const PrimeIdealK& P) {
        if (P.f == 1 && !P.ramified) return {P.q, 1, P.root};
        return {P.q, P.f, std::nullopt};
    }
    PrimeIdealK ideal() const {
        if (root) return PrimeIdealK{q, 1, false, *root, 0};
        return PrimeIdealK{q, f, q == 7, q == 7 ? 2ULL : 0ULL, 0};
    }
};

struct NewformRecord {
    std::string label;
    std::string base_field;  // "Q" or "3.3.49.1"
    bool over_K = false;
    LevelK level_K;       // over K
    long level_N = 0;     // over Q
    std::shared_ptr<const NumberFieldSpec> hecke_field;
    std::map<PrimeKey, NFElem> eigenvalues;
    std::string provenance = "fixture";  // lmfdb | fixture | synthetic
    long complete_below_norm = 0;

    int degree() const { return hecke_field->degree(); }
    const NFElem& ap(const PrimeKey& k) const;
    bool has(const PrimeKey& k) const { return eigenvalues.count(k) != 0; }
    // canonical fingerprint: degree + first three eigenvalue coordinate lists
    std::string fingerprint() const;
};

// One file = one level space.
struct NewformSpace {
    std::string field;  // "Q" or "3.3.49.1"
    bool over_K = false;
    LevelK level_K;
    long level_N = 0;
    std::vector<int> weight;
    std::vector<NewformRecord> forms;

    long dimension() const;  // sum of Hecke-field degrees
};

NewformSpace load_space_json(const std::string& json_text, const std::string& provenance);
NewformSpace load_space_file(const std::string& path, const std::string& provenance = "fixture");
std::string serialize_space(const NewformSpace& space);

// structural analyses ------------------------------------------------------

ContainsK contains_K_status(const NewformRecord& r);
const KEmbeddingResult& contains_K(const NewformRecord& r);  // cached

NewformRecord galois_conjugate_record(const NewformRecord& r, int sigma_power);

// necessary base-change criterion at the available split primes
bool is_base_change(const NewformRecord& r);

struct TwistPair {
    std::size_t i = 0, j = 0;      // indices into the scanned list
    bool cross_level = false;      // partner lives at a different level
    LevelK partner_level;
};

struct TwistScanResult {
    std::vector<TwistPair> pairs;
    std::vector<std::size_t> unmatched;
};

struct AmbiguousPairing : Error {
    using Error::Error;
};

// chi_7 twist pairing across one or more level families (records indexed by
// position in the concatenated list). Throws AmbiguousPairing when two
// candidates agree on all shared primes (demands more eigenvalues).
TwistScanResult detect_twist_pairs(const std::vector<const NewformRecord*>& records);

// synthetic records --------------------------------------------------------

NewformRecord synthesize_from_E(const Int& a, const Int& b,
                                const std::vector<std::uint64_t>& primes);

NewformRecord synthesize_from_F(const Int& a, const Int& b, const KElem& delta,
                                const CaseDescriptor& c,
                                const std::vector<std::uint64_t>& primes);

// Record mimicking the Hilbert newform attached to J(a, b): trace sets with a
// sigma-equivariant labeling; apply_chi7_twist multiplies by chi7(P) (the
// 7 | a+b route stores the twisted form).
NewformRecord synthesize_from_J(const Int& a, const Int& b, const CaseDescriptor& c,
                                const std::vector<std::uint64_t>& primes,
                                bool apply_chi7_twist);

// LMFDB ---------------------------------------------------------------------

// Read-only HTTP JSON client. Base URL from FREY_LMFDB_URL; responses cached
// on disk keyed by the query hash (FREY_LMFDB_CACHE overrides the location).
class LmfdbClient {
  public:
    explicit LmfdbClient(std::string base_url = "", std::string cache_dir = "");
    bool configured() const { return !base_url_.empty(); }
    // fetches /s2/<level>.json (classical level N) in the schema above
    NewformSpace fetch_classical(long level);

  private:
    std::string base_url_;
    std::string cache_dir_;
    std::optional<std::string> cache_get(const std::string& key) const;
    void cache_put(const std::string& key, const std::string& value) const;
};

}  // namespace frey7
