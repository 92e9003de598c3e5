#include "ibt/io.hpp"

#include <cctype>
#include <limits>

namespace ibt {

Rat rat_parse(const std::string& s) {
    if (s.empty()) throw InvalidParams("empty rational literal");
    size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den == 0) throw InvalidParams("zero denominator: " + s);
        return rat(num, den);
    } catch (const std::invalid_argument&) {
        throw InvalidParams("bad rational literal: " + s);
    }
}

Json int_to_json(const Int& v) {
    if (v.fits_slong_p()) return Json(v.get_si());
    return Json(v.get_str());
}

Int json_to_int(const Json& j) {
    if (j.is_number_integer()) return Int(j.get<long>());
    if (j.is_string()) {
        try {
            return Int(j.get<std::string>());
        } catch (const std::invalid_argument&) {
            throw InvalidParams("bad integer literal: " + j.get<std::string>());
        }
    }
    throw InvalidParams("expected an integer or a decimal string");
}

Json context_to_json(const Ctx& c) {
    return Json{{"p", c->p()}, {"m", c->m()}, {"N", c->N()}, {"d", c->d()}};
}

Ctx context_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidParams("context must be an object");
    long p = j.at("p").get<long>();
    long m = j.value("m", 1L);
    long N = j.value("N", 40L);
    long d = j.value("d", 1L);
    return make_field(p, m, N, d);
}

Json field_to_json(const FieldElement& x) {
    Json out = Json::object();
    if (x.is_exact_zero()) {
        out["valuation"] = "INFINITY";
        out["unit"] = Json::array();
        return out;
    }
    const Ctx& c = x.ctx();
    if (x.state() == ElemState::NearZero) {
        out["valuation_at_least"] = rat_str(rat(x.near_zero_bound(), c->d()));
        out["unit"] = Json::array();
        return out;
    }
    out["valuation"] = rat_str(x.valuation());
    auto td = x.trusted_digits();
    Json unit = Json::array();
    for (long j = 0; j < c->d(); ++j) {
        Json digit = Json::array();
        for (long i = 0; i < c->m(); ++i) digit.push_back(int_to_json(td[j * c->m() + i]));
        unit.push_back(std::move(digit));
    }
    out["unit"] = std::move(unit);
    if (x.loss_pdigits() > 0) out["loss"] = x.loss_pdigits();
    return out;
}

FieldElement field_from_json(const Ctx& c, const Json& j) {
    if (!j.is_object()) throw InvalidParams("field element must be an object");
    if (j.contains("valuation_at_least")) {
        Rat b = rat_parse(j.at("valuation_at_least").get<std::string>());
        Rat w = b * c->d();
        if (!rat_is_integer(w)) throw InvalidParams("valuation bound outside the value group");
        return FieldElement::near_zero(c, rat_num(w).get_si());
    }
    const Json& v = j.at("valuation");
    if (v.is_string() && v.get<std::string>() == "INFINITY") return FieldElement::zero(c);
    Rat val = rat_parse(v.get<std::string>());
    Rat wq = val * c->d();
    if (!rat_is_integer(wq)) throw InvalidParams("valuation outside the value group");
    long w = rat_num(wq).get_si();
    const Json& unit = j.at("unit");
    if (!unit.is_array() || (long)unit.size() != c->d())
        throw InvalidParams("unit must list one digit per ramification slot");
    std::vector<Int> digits((size_t)(c->d() * c->m()));
    for (long dj = 0; dj < c->d(); ++dj) {
        const Json& digit = unit.at((size_t)dj);
        if (!digit.is_array() || (long)digit.size() != c->m())
            throw InvalidParams("each unit digit must list one coefficient per basis power");
        for (long i = 0; i < c->m(); ++i)
            digits[(size_t)(dj * c->m() + i)] = json_to_int(digit.at((size_t)i));
    }
    long loss = j.value("loss", 0L);
    if (loss < 0 || loss >= c->d() * c->N()) throw InvalidParams("loss out of range");
    return FieldElement::make(c, w, std::move(digits), c->d() * c->N() - loss);
}

Json mat_to_json(const Mat& a) {
    Json rows = Json::array();
    for (long i = 0; i < a.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < a.cols(); ++j) row.push_back(field_to_json(a.at(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat mat_from_json(const Ctx& c, const Json& j) {
    if (!j.is_array() || j.empty()) throw InvalidParams("matrix must be a non-empty array");
    long rows = (long)j.size();
    long cols = (long)j.at(0).size();
    Mat out(c, rows, cols);
    for (long i = 0; i < rows; ++i) {
        const Json& row = j.at((size_t)i);
        if (!row.is_array() || (long)row.size() != cols)
            throw InvalidParams("matrix rows must have equal length");
        for (long k = 0; k < cols; ++k) out.at(i, k) = field_from_json(c, row.at((size_t)k));
    }
    return out;
}

namespace {

// integers, p^k, z^j, products, sums and differences, parentheses
class EntryParser {
public:
    EntryParser(const Ctx& c, const std::string& s) : c_(c), s_(s) {}

    FieldElement parse() {
        FieldElement r = expr();
        skip();
        if (pos_ != s_.size()) throw InvalidParams("trailing input in entry: " + s_);
        return r;
    }

private:
    FieldElement expr() {
        FieldElement r = term();
        for (;;) {
            skip();
            if (peek() == '+') {
                ++pos_;
                r = r + term();
            } else if (peek() == '-') {
                ++pos_;
                r = r - term();
            } else {
                return r;
            }
        }
    }

    FieldElement term() {
        FieldElement r = factor();
        for (;;) {
            skip();
            if (peek() == '*') {
                ++pos_;
                r = r * factor();
            } else {
                return r;
            }
        }
    }

    FieldElement factor() {
        skip();
        char ch = peek();
        if (ch == '-') {
            ++pos_;
            return -factor();
        }
        if (ch == '(') {
            ++pos_;
            FieldElement r = expr();
            skip();
            if (peek() != ')') throw InvalidParams("unbalanced parenthesis in entry: " + s_);
            ++pos_;
            return r;
        }
        if (ch == 'p') {
            ++pos_;
            long e = exponent(1);
            return FieldElement::p_power(c_, e);
        }
        if (ch == 'z') {
            ++pos_;
            long e = exponent(1);
            if (e < 0) throw InvalidParams("negative generator powers are not supported");
            return FieldElement::generator(c_).pow(e);
        }
        if (std::isdigit((unsigned char)ch)) return FieldElement::from_int(c_, integer());
        throw InvalidParams("bad entry expression: " + s_);
    }

    long exponent(long dflt) {
        skip();
        if (peek() != '^') return dflt;
        ++pos_;
        skip();
        bool neg = false;
        if (peek() == '-') {
            neg = true;
            ++pos_;
        }
        if (!std::isdigit((unsigned char)peek()))
            throw InvalidParams("exponent expected in entry: " + s_);
        Int v = integer();
        if (!v.fits_slong_p()) throw InvalidParams("exponent too large");
        return neg ? -v.get_si() : v.get_si();
    }

    Int integer() {
        size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
        return Int(s_.substr(start, pos_ - start));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }

    const Ctx& c_;
    const std::string& s_;
    size_t pos_ = 0;
};

} // namespace

FieldElement parse_entry(const Ctx& c, const Json& j) {
    if (j.is_number_integer()) return FieldElement::from_int(c, Int(j.get<long>()));
    if (j.is_string()) return EntryParser(c, j.get<std::string>()).parse();
    if (j.is_object()) return field_from_json(c, j);
    throw InvalidParams("matrix entries must be integers, expression strings, or objects");
}

Mat mat_from_entries(const Ctx& c, const Json& j) {
    if (!j.is_array() || j.empty()) throw InvalidParams("matrix must be a non-empty array");
    long rows = (long)j.size();
    long cols = (long)j.at(0).size();
    Mat out(c, rows, cols);
    for (long i = 0; i < rows; ++i) {
        const Json& row = j.at((size_t)i);
        if (!row.is_array() || (long)row.size() != cols)
            throw InvalidParams("matrix rows must have equal length");
        for (long k = 0; k < cols; ++k) out.at(i, k) = parse_entry(c, row.at((size_t)k));
    }
    return out;
}

Json isocrystal_to_json(const Isocrystal& x) {
    return Json{{"p", x.ctx()->p()}, {"s", x.s()}, {"n", x.n()}, {"b", mat_to_json(x.matrix())}};
}

Isocrystal isocrystal_from_json(const Json& j, long N) {
    if (!j.is_object()) throw InvalidParams("instance must be an object");
    long p = j.at("p").get<long>();
    long s = j.value("s", 1L);
    Ctx c = make_field(p, s, N);
    Mat b = mat_from_entries(c, j.at("b"));
    if (j.contains("n") && j.at("n").get<long>() != b.rows())
        throw InvalidParams("declared dimension does not match the matrix");
    return Isocrystal(b);
}

Json newton_point_to_json(const std::vector<Rat>& np) {
    Json out = Json::array();
    size_t i = 0;
    while (i < np.size()) {
        size_t j = i;
        while (j < np.size() && np[j] == np[i]) ++j;
        out.push_back(Json{{"num", int_to_json(rat_num(np[i]))},
                           {"den", int_to_json(rat_den(np[i]))},
                           {"mult", j - i}});
        i = j;
    }
    return out;
}

std::vector<Rat> newton_point_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidParams("slope list must be an array");
    std::vector<Rat> out;
    for (const auto& seg : j) {
        Rat slope = rat(json_to_int(seg.at("num")), json_to_int(seg.at("den")));
        long mult = seg.at("mult").get<long>();
        if (mult < 1) throw InvalidParams("slope multiplicities must be positive");
        for (long t = 0; t < mult; ++t) out.push_back(slope);
    }
    return out;
}

Json norm_to_json(const Norm& a) {
    Json exps = Json::array();
    for (const auto& e : a.exponents()) exps.push_back(rat_str(e));
    return Json{{"basis", mat_to_json(a.basis())}, {"exponents", std::move(exps)}};
}

Norm norm_from_json(const Ctx& c, const Json& j, long den_cap) {
    if (!j.is_object()) throw InvalidParams("norm must be an object");
    Mat basis = mat_from_entries(c, j.at("basis"));
    const Json& ej = j.at("exponents");
    if (!ej.is_array()) throw InvalidParams("exponents must be an array of rational strings");
    std::vector<Rat> exps;
    for (const auto& e : ej) {
        if (e.is_number_integer()) exps.push_back(Rat(e.get<long>()));
        else exps.push_back(rat_parse(e.get<std::string>()));
    }
    return Norm(std::move(basis), std::move(exps), den_cap);
}

Json rel_position_to_json(const std::vector<Rat>& r) {
    Json out = Json::array();
    for (const auto& e : r) out.push_back(rat_str(e));
    return out;
}

Json lattice_to_json(const Mat& m) { return Json{{"basis", mat_to_json(m)}}; }

Mat lattice_from_json(const Ctx& c, const Json& j) {
    if (!j.is_object() || !j.contains("basis"))
        throw InvalidParams("lattice must be an object with a basis");
    return mat_from_entries(c, j.at("basis"));
}

Json decomposition_to_json(const std::vector<IsoclineBlock>& dec) {
    Json out = Json::array();
    for (const auto& blk : dec)
        out.push_back(Json{{"slope", rat_str(blk.slope)},
                           {"mult", blk.mult},
                           {"basis", mat_to_json(blk.basis)},
                           {"block", mat_to_json(blk.block)}});
    return out;
}

unsigned long long instance_hash(const Isocrystal& x) {
    std::string s = isocrystal_to_json(x).dump();
    unsigned long long h = 1469598103934665603ULL;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string metric_convention() {
    return "norm exponents are powers of p; squared distance is the sum of "
           "squared exponent differences in a common diagonalizing basis";
}

namespace {

std::string hash_hex(unsigned long long h) {
    static const char* digits = "0123456789abcdef";
    std::string s = "0x";
    for (int i = 15; i >= 0; --i) s += digits[(h >> (4 * i)) & 0xF];
    return s;
}

} // namespace

Json report_header(const std::string& kind, const Isocrystal& x, unsigned long long seed) {
    Json out = Json::object();
    out["schema_version"] = 1;
    out["kind"] = kind;
    out["instance"] = instance_label(x);
    out["instance_hash"] = hash_hex(instance_hash(x));
    out["seed"] = seed;
    out["metric"] = metric_convention();
    return out;
}

Json scan_report_to_json(const Isocrystal& x, const ScanReport& r) {
    Json out = report_header("scan", x, r.seed);
    out["samples"] = r.samples;
    out["min_nu2"] = rat_str(r.min_nu2);
    out["min_displacement2"] = rat_str(r.min_displacement2);
    if (r.has_kappa2) out["kappa2"] = rat_str(r.kappa2);
    else out["kappa2"] = nullptr;
    out["kappa_note"] =
        "kappa2 is the empirical minimum of displacement^2 over the squared "
        "apartment distance to the minimizing locus; the theoretical constant "
        "is not computed";
    out["violations"] = r.violations;
    out["pass"] = r.pass;
    Json recs = Json::array();
    for (const auto& s : r.records) {
        Json rec{{"index", s.index},
                 {"jittered", s.jittered},
                 {"displacement2", rat_str(s.displacement2)}};
        if (s.has_ratio) rec["ratio"] = rat_str(s.ratio);
        else rec["ratio"] = nullptr;
        recs.push_back(std::move(rec));
    }
    out["records"] = std::move(recs);
    return out;
}

Json verification_report_to_json(const Isocrystal& x, const VerificationReport& r) {
    Json out = report_header("verification", x, r.seed);
    out["suite"] = r.suite;
    Json checks = Json::array();
    for (const auto& ch : r.checks) {
        Json c{{"name", ch.name}, {"pass", ch.pass}};
        if (!ch.witness.empty()) c["witness"] = ch.witness;
        checks.push_back(std::move(c));
    }
    out["checks"] = std::move(checks);
    out["pass"] = r.pass;
    return out;
}

} // namespace ibt
