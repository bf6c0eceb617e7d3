#include <dtflop/oracles.hpp>

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>

namespace dtflop
{

namespace
{

void check_limit(int requested, int ceiling, const char *what)
{
    if (requested < 0) {
        throw std::invalid_argument(std::string(what) + " size must be non-negative");
    }
    if (requested > ceiling) {
        throw LimitError(std::string(what) + " enumeration up to " + std::to_string(requested)
                         + " exceeds the limit " + std::to_string(ceiling));
    }
}

// Height matrix h[i][j], weakly decreasing along rows and columns, padded with zeros.
class HeightSearch
{
public:
    explicit HeightSearch(int n_max)
        : n_max_(n_max), side_(n_max + 2), h_(static_cast<std::size_t>(side_ * side_), 0),
          counts_(static_cast<std::size_t>(n_max + 1), 0)
    {
    }

    std::vector<std::int64_t> run()
    {
        visit(0);
        return counts_;
    }

private:
    int &at(int i, int j)
    {
        return h_[static_cast<std::size_t>(i * side_ + j)];
    }

    bool addable(int i, int j)
    {
        const int next = at(i, j) + 1;
        return (i == 0 || at(i - 1, j) >= next) && (j == 0 || at(i, j - 1) >= next);
    }

    bool removable(int i, int j)
    {
        const int top = at(i, j);
        return top > 0 && at(i + 1, j) < top && at(i, j + 1) < top;
    }

    // Parent = remove the top cell of the lexicographically last removable column.
    bool is_last_removable(int i0, int j0)
    {
        for (int i = i0; i < n_max_; ++i) {
            for (int j = (i == i0 ? j0 + 1 : 0); j < n_max_; ++j) {
                if (at(i, j) == 0) {
                    break;
                }
                if (removable(i, j)) {
                    return false;
                }
            }
        }
        return true;
    }

    void visit(int size)
    {
        ++counts_[static_cast<std::size_t>(size)];
        if (size == n_max_) {
            return;
        }
        for (int i = 0; i < n_max_; ++i) {
            for (int j = 0; j < n_max_; ++j) {
                if (!addable(i, j)) {
                    if (at(i, j) == 0) {
                        break;
                    }
                    continue;
                }
                ++at(i, j);
                if (is_last_removable(i, j)) {
                    visit(size + 1);
                }
                --at(i, j);
                if (at(i, j) == 0) {
                    break;
                }
            }
            if (at(i, 0) == 0) {
                break;
            }
        }
    }

    int n_max_;
    int side_;
    std::vector<int> h_;
    std::vector<std::int64_t> counts_;
};

// Stone poset of the pyramid arrangement down to a given layer.
struct PyramidPoset {
    struct Stone {
        int layer, a, b;
        bool white;
        std::vector<int> parents, children;
    };
    std::vector<Stone> stones;

    explicit PyramidPoset(int layers)
    {
        std::map<std::tuple<int, int, int>, int> index;
        for (int layer = 1; layer <= layers; ++layer) {
            const int j = (layer + 1) / 2;
            const bool white = layer % 2 == 1;
            const int rows = j, cols = white ? j : j + 1;
            for (int a = 0; a < rows; ++a) {
                for (int b = 0; b < cols; ++b) {
                    index[{layer, a, b}] = static_cast<int>(stones.size());
                    stones.push_back({layer, a, b, white, {}, {}});
                }
            }
        }
        for (std::size_t s = 0; s < stones.size(); ++s) {
            const auto &st = stones[s];
            const std::array<std::tuple<int, int, int>, 2> kids =
                st.white ? std::array{std::tuple{st.layer + 1, st.a, st.b}, std::tuple{st.layer + 1, st.a, st.b + 1}}
                         : std::array{std::tuple{st.layer + 1, st.a, st.b}, std::tuple{st.layer + 1, st.a + 1, st.b}};
            for (const auto &k : kids) {
                const auto it = index.find(k);
                if (it != index.end()) {
                    stones[s].children.push_back(it->second);
                    stones[static_cast<std::size_t>(it->second)].parents.push_back(static_cast<int>(s));
                }
            }
        }
    }
};

class PyramidSearch
{
public:
    PyramidSearch(const PyramidPoset &poset, int max_stones)
        : poset_(poset), max_(max_stones), in_(poset.stones.size(), false)
    {
    }

    PyramidTable run()
    {
        visit(0, 0);
        return table_;
    }

private:
    bool addable(int s) const
    {
        const auto &st = poset_.stones[static_cast<std::size_t>(s)];
        return !in_[static_cast<std::size_t>(s)]
               && std::all_of(st.parents.begin(), st.parents.end(),
                              [&](int p) { return in_[static_cast<std::size_t>(p)]; });
    }

    bool removable(int s) const
    {
        const auto &st = poset_.stones[static_cast<std::size_t>(s)];
        return std::none_of(st.children.begin(), st.children.end(),
                            [&](int c) { return in_[static_cast<std::size_t>(c)]; });
    }

    void visit(int w, int b)
    {
        ++table_[{w, b}];
        if (w + b == max_) {
            return;
        }
        // Addable stones lie at most one layer below the deepest member.
        const std::size_t scan = std::min(poset_.stones.size(), frontier_bound());
        for (std::size_t s = 0; s < scan; ++s) {
            const int si = static_cast<int>(s);
            if (!addable(si)) {
                continue;
            }
            in_[s] = true;
            members_.push_back(si);
            bool last = true;
            for (const int m : members_) {
                if (m > si && removable(m)) {
                    last = false;
                    break;
                }
            }
            if (last) {
                const bool white = poset_.stones[s].white;
                visit(w + (white ? 1 : 0), b + (white ? 0 : 1));
            }
            members_.pop_back();
            in_[s] = false;
        }
    }

    std::size_t frontier_bound() const
    {
        int deepest = 0;
        for (const int m : members_) {
            deepest = std::max(deepest, poset_.stones[static_cast<std::size_t>(m)].layer);
        }
        std::size_t bound = 0;
        while (bound < poset_.stones.size() && poset_.stones[bound].layer <= deepest + 1) {
            ++bound;
        }
        return bound;
    }

    const PyramidPoset &poset_;
    int max_;
    std::vector<bool> in_;
    std::vector<int> members_;
    PyramidTable table_;
};

} // namespace

std::vector<std::int64_t> plane_partition_counts(int n_max, const OracleLimits &limits)
{
    check_limit(n_max, limits.plane, "plane partition");
    return HeightSearch(n_max).run();
}

std::vector<std::int64_t> plane_partition_counts_baseline(int n_max, const OracleLimits &limits)
{
    check_limit(n_max, limits.plane, "plane partition");
    using Cell = std::array<int, 3>;
    using Ideal = std::set<Cell>;
    std::vector<std::int64_t> counts{1};
    std::set<Ideal> level{Ideal{}};
    for (int n = 1; n <= n_max; ++n) {
        std::set<Ideal> next;
        for (const auto &ideal : level) {
            // Candidate cells: the origin and unit steps off existing cells.
            std::set<Cell> candidates{{0, 0, 0}};
            for (const auto &c : ideal) {
                for (int d = 0; d < 3; ++d) {
                    Cell e = c;
                    ++e[static_cast<std::size_t>(d)];
                    candidates.insert(e);
                }
            }
            for (const auto &c : candidates) {
                if (ideal.contains(c)) {
                    continue;
                }
                bool ok = true;
                for (int d = 0; d < 3 && ok; ++d) {
                    if (c[static_cast<std::size_t>(d)] > 0) {
                        Cell below = c;
                        --below[static_cast<std::size_t>(d)];
                        ok = ideal.contains(below);
                    }
                }
                if (ok) {
                    Ideal grown = ideal;
                    grown.insert(c);
                    next.insert(std::move(grown));
                }
            }
        }
        counts.push_back(static_cast<std::int64_t>(next.size()));
        level = std::move(next);
    }
    return counts;
}

std::int64_t count_plane_partitions(int n, const OracleLimits &limits)
{
    return plane_partition_counts(n, limits).back();
}

PyramidTable count_pyramid_partitions(int max_stones, const OracleLimits &limits)
{
    check_limit(max_stones, limits.pyramid, "pyramid partition");
    const PyramidPoset poset(std::max(max_stones, 1));
    return PyramidSearch(poset, max_stones).run();
}

PyramidTable count_pyramid_partitions_baseline(int max_stones, const OracleLimits &limits)
{
    check_limit(max_stones, limits.pyramid, "pyramid partition");
    const PyramidPoset poset(std::max(max_stones, 1));
    PyramidTable table{{{0, 0}, 1}};
    std::set<std::vector<int>> level{std::vector<int>{}};
    for (int size = 1; size <= max_stones; ++size) {
        std::set<std::vector<int>> next;
        for (const auto &ideal : level) {
            const std::set<int> members(ideal.begin(), ideal.end());
            for (std::size_t s = 0; s < poset.stones.size(); ++s) {
                const int si = static_cast<int>(s);
                if (members.contains(si)) {
                    continue;
                }
                const auto &parents = poset.stones[s].parents;
                if (!std::all_of(parents.begin(), parents.end(), [&](int p) { return members.contains(p); })) {
                    continue;
                }
                auto grown = ideal;
                grown.insert(std::upper_bound(grown.begin(), grown.end(), si), si);
                next.insert(std::move(grown));
            }
        }
        for (const auto &ideal : next) {
            int w = 0;
            for (const int s : ideal) {
                w += poset.stones[static_cast<std::size_t>(s)].white ? 1 : 0;
            }
            ++table[{w, size - w}];
        }
        level = std::move(next);
    }
    return table;
}

Monomial VariableMap::apply(int w, int b) const
{
    return {alpha[0] * w + alpha[1] * b + alpha[2], CurveClass{alpha[3] * w + alpha[4] * b + alpha[5]}};
}

int VariableMap::sign(const Monomial &key) const
{
    return parity_sign(sign_rule[0] * key.n + sign_rule[1] * key.beta[0] + sign_rule[2]);
}

std::string VariableMap::describe() const
{
    auto affine = [](int cw, int cb, int c0) {
        std::ostringstream os;
        bool first = true;
        auto term = [&](int coeff, const char *var) {
            if (coeff == 0) {
                return;
            }
            if (!first) {
                os << (coeff > 0 ? " + " : " - ");
            } else if (coeff < 0) {
                os << "-";
            }
            const int a = std::abs(coeff);
            if (a != 1 || var[0] == '\0') {
                os << a;
            }
            os << var;
            first = false;
        };
        term(cw, "w");
        term(cb, "b");
        term(c0, "");
        if (first) {
            os << "0";
        }
        return os.str();
    };
    std::ostringstream os;
    os << "n = " << affine(alpha[0], alpha[1], alpha[2]) << ", m = " << affine(alpha[3], alpha[4], alpha[5])
       << ", sign = (-1)^(" << sign_rule[0] << "n + " << sign_rule[1] << "m + " << sign_rule[2] << ")";
    return os.str();
}

bool map_holds(const VariableMap &map, const PyramidTable &counts, const ConeSeries &reference, int total)
{
    for (int w = 0; w <= total; ++w) {
        for (int b = 0; w + b <= total; ++b) {
            const auto key = map.apply(w, b);
            if (!reference.is_known(key)) {
                return false;
            }
            const auto it = counts.find({w, b});
            const std::int64_t c = it == counts.end() ? 0 : it->second;
            if (reference.coefficient(key) != Rational(map.sign(key) * c)) {
                return false;
            }
        }
    }
    return true;
}

std::vector<VariableMap> variable_map_candidates(const PyramidTable &counts, const ConeSeries &reference, int total)
{
    if (reference.model().rank() != 1) {
        throw ConfigurationError("the pyramid dictionary is fitted against a rank-one reference");
    }
    struct Bucket {
        int w, b;
        std::int64_t count;
    };
    std::vector<Bucket> buckets;
    for (int w = 0; w <= total; ++w) {
        for (int b = 0; w + b <= total; ++b) {
            const auto it = counts.find({w, b});
            buckets.push_back({w, b, it == counts.end() ? 0 : it->second});
        }
    }
    std::vector<VariableMap> out;
    VariableMap map;
    std::array<int, 6> &a = map.alpha;
    // Odometer over [-2, 2]^6.
    std::array<int, 6> digits{};
    for (;;) {
        for (std::size_t i = 0; i < 6; ++i) {
            a[i] = digits[i] - 2;
        }
        const bool canonical = a[4] > 0 || (a[4] == 0 && (a[3] > 0 || (a[3] == 0 && a[5] > 0)));
        if (canonical && a[0] * a[4] - a[1] * a[3] != 0) {
            bool ok = true;
            for (const auto &bk : buckets) {
                const auto key = map.apply(bk.w, bk.b);
                if (!reference.is_known(key) || abs(reference.coefficient(key)) != Rational(bk.count)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                for (int rule = 0; rule < 8; ++rule) {
                    map.sign_rule = {rule & 1, (rule >> 1) & 1, (rule >> 2) & 1};
                    if (map_holds(map, counts, reference, total)) {
                        out.push_back(map);
                    }
                }
                map.sign_rule = {};
            }
        }
        std::size_t i = 0;
        while (i < 6 && ++digits[i] == 5) {
            digits[i++] = 0;
        }
        if (i == 6) {
            break;
        }
    }
    return out;
}

VariableMap fit_variable_map(const PyramidTable &counts, const ConeSeries &reference, int total)
{
    const auto found = variable_map_candidates(counts, reference, total);
    if (found.size() == 1) {
        return found.front();
    }
    std::string msg = found.empty() ? "no variable map fits the pyramid counts"
                                    : std::to_string(found.size()) + " variable maps fit the pyramid counts:";
    for (const auto &m : found) {
        msg += "\n  " + m.describe();
    }
    throw DomainError(msg);
}

Rational point_N(std::int64_t chi, std::int64_t n)
{
    if (n == 0) {
        throw DomainError("point_N needs n != 0");
    }
    n = std::abs(n);
    std::int64_t sigma2 = 0;
    for (std::int64_t d = 1; d <= n; ++d) {
        if (n % d == 0) {
            sigma2 += d * d;
        }
    }
    return make_rational(-chi * sigma2, n * n);
}

Rational conifold_N(std::int64_t n, std::int64_t m, std::int64_t chi)
{
    if (m == 0) {
        return n == 0 ? Rational(0) : point_N(chi, n);
    }
    if (n % std::abs(m) != 0) {
        return 0;
    }
    return make_rational(1, m * m);
}

NProvider conifold_provider(std::int64_t chi)
{
    return [chi](std::int64_t n, const CurveClass &beta) -> std::optional<Rational> {
        if (beta.rank() == 0) {
            return std::nullopt;
        }
        for (std::size_t i = 1; i < beta.rank(); ++i) {
            if (beta[i] != 0) {
                return std::nullopt;
            }
        }
        return conifold_N(n, beta[0], chi);
    };
}

NProvider hatted(NProvider base)
{
    return [base = std::move(base)](std::int64_t n, const CurveClass &beta) -> std::optional<Rational> {
        auto v = base(n, beta);
        if (!v) {
            return v;
        }
        std::int64_t deg = 0;
        for (const auto c : beta.coords()) {
            deg += c;
        }
        return Rational(parity_sign(deg + 1) * *v);
    };
}

NProvider table_provider(std::map<Monomial, Rational> values, std::optional<Rational> fallback)
{
    return [values = std::move(values), fallback](std::int64_t n, const CurveClass &beta) -> std::optional<Rational> {
        const auto it = values.find(Monomial{n, beta});
        if (it != values.end()) {
            return it->second;
        }
        return fallback;
    };
}

} // namespace dtflop
