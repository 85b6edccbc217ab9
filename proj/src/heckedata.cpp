#include "frey7/heckedata.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>

#include <nlohmann/json.hpp>

#define CPPHTTPLIB_NO_EXCEPTIONS 0
#include <httplib.h>

namespace frey7 {

using nlohmann::json;
namespace fs = std::filesystem;

const NFElem& NewformRecord::ap(const PrimeKey& k) const {
    auto it = eigenvalues.find(k);
    if (it == eigenvalues.end())
        throw Error("missing eigenvalue at q=" + std::to_string(k.q) + " for form " + label);
    return it->second;
}

std::string NewformRecord::fingerprint() const {
    std::ostringstream os;
    os << "deg" << degree() << ";";
    int shown = 0;
    for (const auto& [key, val] : eigenvalues) {
        if (shown >= 3) break;
        os << key.q << (key.root ? "r" + std::to_string(*key.root) : "") << ":";
        for (const auto& c : val.coords) os << c.get_str() << ",";
        os << ";";
        ++shown;
    }
    return sha256_hex(os.str()).substr(0, 16);
}

long NewformSpace::dimension() const {
    long d = 0;
    for (const auto& f : forms) d += f.degree();
    return d;
}

// ----------------------------------------------------------------- schema

namespace {

Rat rat_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw Error("ap entry must be [num, den]");
    Rat num(j[0].get<std::string>().c_str());
    if (j[0].is_number_integer()) num = Rat(static_cast<long>(j[0].get<long long>()));
    Rat den(static_cast<long>(j[1].get<long long>()));
    if (den == 0) throw Error("zero denominator");
    Rat v = num / den;
    v.canonicalize();
    return v;
}

json rat_to_json(const Rat& r) {
    json out = json::array();
    out.push_back(json::parse(r.get_num().get_str()));
    out.push_back(json::parse(r.get_den().get_str()));
    return out;
}

void validate_record(const NewformRecord& r) {
    // Weil bounds at good primes under all embeddings (numeric sanity)
    auto emb = field_embeddings(*r.hecke_field);
    for (const auto& [key, val] : r.eigenvalues) {
        bool good = r.over_K ? (key.q != 2 && key.q != 3 && key.q != 7)
                             : (r.level_N % static_cast<long>(key.q) != 0);
        if (!good) continue;
        if (r.over_K && key.root) {
            // root must actually define a prime: cubic(root) = 0 mod q
            PolyFp cubic = fp::reduce_int_poly({Int(-1), Int(-2), Int(1), Int(1)}, key.q);
            if (fp::eval(cubic, *key.root, key.q) != 0)
                throw Error("eigenvalue key root is not a root of K's cubic mod q");
            if (residue_degree_in_K(key.q) != 1) throw Error("split key at inert prime");
        }
        double bound = 2 * std::pow(double(key.q), key.f / 2.0) + 1e-6;
        for (auto& [re, im] : emb) {
            double v = 0, p = 1;
            // |sum c_i alpha^i| with alpha = re + i*im: evaluate via complex
            double vr = 0, vi = 0, pr = 1, pi = 0;
            for (const auto& c : val.coords) {
                double cd = c.get_d();
                vr += cd * pr;
                vi += cd * pi;
                double npr = pr * re - pi * im;
                pi = pr * im + pi * re;
                pr = npr;
            }
            (void)v;
            (void)p;
            if (std::hypot(vr, vi) > bound)
                throw Error("eigenvalue violates Weil bound at q=" + std::to_string(key.q) +
                            " for form " + r.label);
        }
    }
    // completeness of the declared range
    if (r.complete_below_norm > 1) {
        for (std::uint64_t q = 2; static_cast<long>(q) <= r.complete_below_norm;
             q = next_prime_u64(q)) {
            if (r.over_K) {
                if (q == 2 || q == 3 || q == 7) continue;
                int f = residue_degree_in_K(q);
                Int norm = Int(static_cast<unsigned long>(q));
                if (f == 3) norm = norm * norm * norm;
                if (norm > r.complete_below_norm) continue;
                if (f == 3) {
                    if (!r.has(PrimeKey{q, 3, std::nullopt}))
                        throw Error("incomplete eigenvalues: missing inert q=" +
                                    std::to_string(q));
                } else {
                    for (const auto& P : split_prime(q))
                        if (!r.has(PrimeKey::of(P)))
                            throw Error("incomplete eigenvalues: missing split q=" +
                                        std::to_string(q));
                }
            } else {
                if (r.level_N % static_cast<long>(q) == 0) continue;
                if (!r.has(PrimeKey{q, 1, std::nullopt}))
                    throw Error("incomplete eigenvalues: missing q=" + std::to_string(q));
            }
        }
    }
}

}  // namespace

NewformSpace load_space_json(const std::string& json_text, const std::string& provenance) {
    json j = json::parse(json_text);
    NewformSpace sp;
    sp.field = j.at("field").get<std::string>();
    sp.over_K = sp.field != "Q";
    const auto& lv = j.at("level");
    if (lv.contains("N")) {
        if (sp.over_K) throw Error("classical level with non-Q field");
        sp.level_N = lv.at("N").get<long>();
    } else {
        sp.level_K.q2 = lv.at("q2").get<int>();
        sp.level_K.q3 = lv.at("q3").get<int>();
        sp.level_K.q7 = lv.at("q7").get<int>();
    }
    sp.weight = j.at("weight").get<std::vector<int>>();
    for (int w : sp.weight)
        if (w != 2) throw Error("only parallel weight 2 is supported");
    if (sp.weight.size() != (sp.over_K ? 3u : 1u)) throw Error("weight vector length mismatch");

    for (const auto& jf : j.at("forms")) {
        NewformRecord r;
        r.label = jf.at("label").get<std::string>();
        r.base_field = sp.field;
        r.over_K = sp.over_K;
        r.level_K = sp.level_K;
        r.level_N = sp.level_N;
        r.provenance = provenance;
        std::vector<Int> poly;
        for (const auto& c : jf.at("hecke_poly")) poly.emplace_back(c.dump());
        r.hecke_field = std::make_shared<NumberFieldSpec>(std::move(poly));
        r.complete_below_norm = jf.value("complete_below_norm", 0L);
        for (const auto& je : jf.at("eigenvalues")) {
            PrimeKey key;
            key.q = je.at("q").get<std::uint64_t>();
            key.f = je.at("f").get<int>();
            if (!je.at("root").is_null()) key.root = je.at("root").get<std::uint64_t>();
            std::vector<Rat> coords;
            for (const auto& ap : je.at("ap")) coords.push_back(rat_from_json(ap));
            if (static_cast<int>(coords.size()) != r.hecke_field->degree())
                throw Error("ap coordinate length mismatch in form " + r.label);
            r.eigenvalues.emplace(key, nf_make(r.hecke_field, std::move(coords)));
        }
        validate_record(r);
        sp.forms.push_back(std::move(r));
    }
    return sp;
}

NewformSpace load_space_file(const std::string& path, const std::string& provenance) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return load_space_json(text, provenance);
}

std::string serialize_space(const NewformSpace& sp) {
    json j;
    j["field"] = sp.field;
    if (sp.over_K)
        j["level"] = {{"q2", sp.level_K.q2}, {"q3", sp.level_K.q3}, {"q7", sp.level_K.q7}};
    else
        j["level"] = {{"N", sp.level_N}};
    j["weight"] = sp.weight;
    j["forms"] = json::array();
    for (const auto& r : sp.forms) {
        json jf;
        jf["label"] = r.label;
        json poly = json::array();
        for (const auto& c : r.hecke_field->coeffs) poly.push_back(json::parse(c.get_str()));
        jf["hecke_poly"] = poly;
        jf["complete_below_norm"] = r.complete_below_norm;
        json evs = json::array();
        for (const auto& [key, val] : r.eigenvalues) {
            json je;
            je["q"] = key.q;
            je["f"] = key.f;
            if (key.root)
                je["root"] = *key.root;
            else
                je["root"] = nullptr;
            json ap = json::array();
            for (const auto& c : val.coords) ap.push_back(rat_to_json(c));
            je["ap"] = ap;
            evs.push_back(je);
        }
        jf["eigenvalues"] = evs;
        j["forms"].push_back(jf);
    }
    return j.dump(1);
}

// ----------------------------------------------------------- analyses

namespace {

std::map<std::vector<Int>, KEmbeddingResult>& k_roots_cache() {
    static std::map<std::vector<Int>, KEmbeddingResult> c;
    return c;
}
std::mutex k_roots_mtx;

}  // namespace

const KEmbeddingResult& contains_K(const NewformRecord& r) {
    std::lock_guard lk(k_roots_mtx);
    auto& cache = k_roots_cache();
    auto it = cache.find(r.hecke_field->coeffs);
    if (it == cache.end()) {
        KEmbeddingResult res = find_K_embeddings(*r.hecke_field);
        it = cache.emplace(r.hecke_field->coeffs, std::move(res)).first;
        // rebind roots to this record's field object
    }
    return it->second;
}

ContainsK contains_K_status(const NewformRecord& r) { return contains_K(r).status; }

NewformRecord galois_conjugate_record(const NewformRecord& r, int sigma_power) {
    if (!r.over_K) throw Error("galois_conjugate_record: record must be over K");
    NewformRecord out = r;
    out.eigenvalues.clear();
    for (const auto& [key, val] : r.eigenvalues) {
        if (key.root) {
            PrimeIdealK P = key.ideal();
            PrimeIdealK sP = sigma_prime(P, sigma_power);
            out.eigenvalues.emplace(PrimeKey::of(P), r.ap(PrimeKey::of(sP)));
        } else {
            out.eigenvalues.emplace(key, val);
        }
    }
    return out;
}

bool is_base_change(const NewformRecord& r) {
    if (!r.over_K) throw Error("is_base_change: record must be over K");
    bool saw_split = false;
    for (const auto& [key, val] : r.eigenvalues) {
        if (!key.root) continue;
        saw_split = true;
        PrimeIdealK P = key.ideal();
        PrimeKey k2 = PrimeKey::of(sigma_prime(P, 1));
        if (r.has(k2) && !(r.ap(k2) == val)) return false;
    }
    if (!saw_split) throw Error("is_base_change: needs eigenvalues at a split prime");
    return true;
}

TwistScanResult detect_twist_pairs(const std::vector<const NewformRecord*>& records) {
    TwistScanResult out;
    std::vector<int> partner(records.size(), -1);
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& h = *records[i];
        std::vector<std::size_t> candidates;
        bool definitive_found = false;
        for (std::size_t j = 0; j < records.size(); ++j) {
            const auto& g = *records[j];
            if (g.hecke_field->coeffs != h.hecke_field->coeffs) continue;
            bool all_match = true, definitive = false;
            int shared = 0;
            for (const auto& [key, val] : h.eigenvalues) {
                if (!g.has(key)) continue;
                ++shared;
                int s = chi7_sign(key.ideal());
                NFElem twisted = s == 1 ? val : nf_scale(Rat(-1), val);
                if (!(g.ap(key) == twisted)) {
                    all_match = false;
                    break;
                }
                if (s == -1 && !val.is_zero()) definitive = true;
            }
            if (shared == 0) continue;
            if (all_match && definitive && i != j) {
                candidates.push_back(j);
                definitive_found = true;
            } else if (all_match && !definitive) {
                candidates.push_back(j);  // degenerate candidate (e.g. CM zeros)
            }
        }
        if (definitive_found) {
            std::vector<std::size_t> defin;
            for (auto j : candidates)
                if (j != i) defin.push_back(j);
            if (defin.size() > 1)
                throw AmbiguousPairing("two twist candidates agree on all shared primes for " +
                                       h.label + "; need more eigenvalues");
            partner[i] = static_cast<int>(defin[0]);
        } else if (!candidates.empty()) {
            throw AmbiguousPairing("twist pairing for " + h.label +
                                   " undecidable: no nonzero eigenvalue at a chi7 = -1 prime");
        }
    }
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (partner[i] < 0) {
            out.unmatched.push_back(i);
            continue;
        }
        std::size_t j = partner[i];
        if (j < i) continue;  // already paired
        if (partner[j] != static_cast<int>(i))
            throw AmbiguousPairing("asymmetric twist pairing");
        TwistPair tp;
        tp.i = i;
        tp.j = j;
        tp.cross_level = records[i]->level_K != records[j]->level_K;
        tp.partner_level = records[j]->level_K;
        out.pairs.push_back(tp);
    }
    return out;
}

// ------------------------------------------------------------ synthesize

namespace {

std::shared_ptr<const NumberFieldSpec> rational_spec() {
    static auto s = std::make_shared<NumberFieldSpec>(NumberFieldSpec::rationals());
    return s;
}

std::shared_ptr<const NumberFieldSpec> k_cubic_spec() {
    static auto s = std::make_shared<NumberFieldSpec>(NumberFieldSpec::k_cubic());
    return s;
}

NFElem k_as_nf(const KElem& u) {
    return nf_make(k_cubic_spec(), {u.c[0], u.c[1], u.c[2]});
}

}  // namespace

NewformRecord synthesize_from_E(const Int& a, const Int& b,
                                const std::vector<std::uint64_t>& primes) {
    NewformRecord r;
    r.label = "synthetic-E(" + a.get_str() + "," + b.get_str() + ")";
    r.base_field = "Q";
    r.over_K = false;
    r.level_N = (1L << conductor_exponent_E_at_2(a, b)) * 49L;
    r.hecke_field = rational_spec();
    r.provenance = "synthetic";
    for (auto q : primes) {
        long aq = count_points_E(a, b, q);  // propagates BadReductionError
        r.eigenvalues.emplace(PrimeKey{q, 1, std::nullopt},
                              nf_from_rat(r.hecke_field, Rat(aq)));
    }
    return r;
}

NewformRecord synthesize_from_F(const Int& a, const Int& b, const KElem& delta,
                                const CaseDescriptor& c,
                                const std::vector<std::uint64_t>& primes) {
    NewformRecord r;
    r.label = "synthetic-F(" + a.get_str() + "," + b.get_str() + ")";
    r.base_field = "3.3.49.1";
    r.over_K = true;
    r.level_K = serre_level_F(c);
    r.hecke_field = rational_spec();
    r.provenance = "synthetic";
    for (auto q : primes) {
        for (const auto& P : split_prime(q)) {
            long ap = count_points_F(a, b, delta, P);
            r.eigenvalues.emplace(PrimeKey::of(P), nf_from_rat(r.hecke_field, Rat(ap)));
        }
    }
    return r;
}

NewformRecord synthesize_from_J(const Int& a, const Int& b, const CaseDescriptor& c,
                                const std::vector<std::uint64_t>& primes,
                                bool apply_chi7_twist) {
    NewformRecord r;
    r.label = "synthetic-J(" + a.get_str() + "," + b.get_str() + ")";
    r.base_field = "3.3.49.1";
    r.over_K = true;
    r.level_K = serre_level_J(c);
    r.hecke_field = k_cubic_spec();
    r.provenance = "synthetic";
    for (auto q : primes) {
        TraceSet T = trace_set(a, b, q);
        auto Ps = split_prime(q);
        if (!T.split) {
            int s = apply_chi7_twist ? chi7_sign(Ps[0]) : 1;
            KElem u = s == 1 ? T.elems[0] : k_neg(T.elems[0]);
            r.eigenvalues.emplace(PrimeKey::of(Ps[0]), k_as_nf(u));
        } else {
            // sigma-equivariant labeling: P0 (smallest root) gets the first
            // sorted trace, sigma(P0) its sigma-image, etc.
            KElem u = T.elems[0];
            PrimeIdealK P = Ps[0];
            for (int k = 0; k < 3; ++k) {
                KElem v = k_sigma(u, k);
                PrimeIdealK Pk = sigma_prime(P, k);
                int s = apply_chi7_twist ? chi7_sign(Pk) : 1;
                r.eigenvalues.emplace(PrimeKey::of(Pk), k_as_nf(s == 1 ? v : k_neg(v)));
            }
        }
    }
    return r;
}

// ----------------------------------------------------------------- LMFDB

LmfdbClient::LmfdbClient(std::string base_url, std::string cache_dir)
    : base_url_(std::move(base_url)), cache_dir_(std::move(cache_dir)) {
    if (base_url_.empty()) {
        if (const char* env = std::getenv("FREY_LMFDB_URL")) base_url_ = env;
    }
    if (cache_dir_.empty()) {
        if (const char* env = std::getenv("FREY_LMFDB_CACHE")) {
            cache_dir_ = env;
        } else if (const char* home = std::getenv("HOME")) {
            cache_dir_ = std::string(home) + "/.cache/frey7/lmfdb";
        } else {
            cache_dir_ = "/tmp/frey7-lmfdb-cache";
        }
    }
}

std::optional<std::string> LmfdbClient::cache_get(const std::string& key) const {
    fs::path p = fs::path(cache_dir_) / (key + ".json");
    if (!fs::exists(p)) return std::nullopt;
    std::ifstream in(p);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void LmfdbClient::cache_put(const std::string& key, const std::string& value) const {
    std::error_code ec;
    fs::create_directories(cache_dir_, ec);
    std::ofstream out(fs::path(cache_dir_) / (key + ".json"));
    out << value;
}

NewformSpace LmfdbClient::fetch_classical(long level) {
    if (!configured()) throw Error("LMFDB client not configured (set FREY_LMFDB_URL)");
    std::string query = "/s2/" + std::to_string(level) + ".json";
    std::string key = sha256_hex(base_url_ + query).substr(0, 24);
    if (auto hit = cache_get(key)) return load_space_json(*hit, "lmfdb");

    httplib::Client cli(base_url_);
    cli.set_connection_timeout(10);
    cli.set_read_timeout(30);
    auto res = cli.Get(query);
    if (!res || res->status != 200)
        throw Error("LMFDB fetch failed for level " + std::to_string(level) +
                    (res ? " (status " + std::to_string(res->status) + ")" : " (no response)"));
    NewformSpace sp = load_space_json(res->body, "lmfdb");  // validate before caching
    cache_put(key, res->body);
    return sp;
}

}  // namespace frey7
