#include "enumerate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "reference.hpp"
#include "tcw/pes.hpp"

namespace ref {

namespace {

using Bits = std::vector<std::uint64_t>;

struct Model {
    Structure s;
    std::vector<Set> cfgs;
    std::map<Set, int> index;
    std::vector<Set> res, en;

    explicit Model(const tcw::Pes& p) : s(Structure::from(p)), cfgs(configs(s))
    {
        for (std::size_t i = 0; i < cfgs.size(); ++i) index[cfgs[i]] = static_cast<int>(i);
        for (Set c : cfgs) {
            res.push_back(residual(s, c));
            Set e = 0;
            for (int x : ids(residual(s, c)))
                if (config(s, c | Set{1} << x)) e |= Set{1} << x;
            en.push_back(e);
        }
    }

    long states(int k) const
    {
        long m = static_cast<long>(cfgs.size());
        for (int i = 0; i < k; ++i) m *= s.n;
        return m;
    }
};

struct State {
    int ci;
    std::vector<int> eta;
};

struct Context {
    int k;
    long total = 0;
    std::vector<long> offset;  // per model
    std::vector<std::vector<State>> st;  // per model
};

bool conc(const Structure& s, int a, int b) { return a != b && !s.lt[a][b] && !s.lt[b][a] && !s.cf[a][b]; }

struct Class {
    unsigned fv;
    Bits den;
    tcw::Formula rep;
};

struct KeyHash {
    std::size_t operator()(const std::pair<unsigned, Bits>& k) const
    {
        std::size_t h = k.first;
        for (auto w : k.second) h = h * 1000003u ^ std::hash<std::uint64_t>{}(w);
        return h;
    }
};

class Enumerator {
  public:
    Enumerator(const tcw::Pes& a, const tcw::Pes& b, Frag f, int depth) : frag_(f), depth_(depth)
    {
        models_.emplace_back(a);
        models_.emplace_back(b);
        std::set<std::string> ls;
        for (auto& m : models_) ls.insert(m.s.label.begin(), m.s.label.end());
        labels_.assign(ls.begin(), ls.end());
        max_n_ = std::max(models_[0].s.n, models_[1].s.n);
        int kmax = (f == Frag::HM || f == Frag::Step) ? 1 : depth;
        for (int k = 0; k <= kmax; ++k) ctx_.push_back(make_context(k));
        classes_.resize(ctx_.size());
        seen_.resize(ctx_.size());
        lp_.resize(ctx_.size());
        for (std::size_t k = 0; k < ctx_.size(); ++k)
            for (unsigned m = 0; m < (1u << k); ++m) lp_[k].push_back(legal_bits(static_cast<int>(k), m));
    }

    Enumeration run()
    {
        for (std::size_t k = 0; k < ctx_.size(); ++k) add(static_cast<int>(k), 0, full(static_cast<int>(k)), tcw::Formula::top());
        std::vector<std::vector<std::size_t>> count(depth_ + 1, std::vector<std::size_t>(ctx_.size()));
        for (std::size_t k = 0; k < ctx_.size(); ++k) count[0][k] = classes_[k].size();
        for (int d = 1; d <= depth_; ++d) {
            for (int k = 0; k < static_cast<int>(ctx_.size()); ++k) {
                if (k + d > depth_ && !(frag_ == Frag::HM || frag_ == Frag::Step)) continue;
                if ((frag_ == Frag::HM || frag_ == Frag::Step) && k > 0) continue;
                grow(d, k, count[d - 1]);
            }
            if (frag_ == Frag::Pomset)
                // Closed formulas are available under any binder.
                for (int k = 1; k < static_cast<int>(ctx_.size()); ++k)
                    for (std::size_t i = count[d - 1][0]; i < classes_[0].size(); ++i) {
                        Class c = classes_[0][i];
                        add(k, 0, lift(c.den, k), c.rep);
                    }
            for (std::size_t k = 0; k < ctx_.size(); ++k) count[d][k] = classes_[k].size();
        }
        Enumeration out;
        for (auto& c : classes_) out.total_classes += c.size();
        for (const auto& c : classes_[0]) {
            long bl = ctx_[0].offset[0] + 0;  // empty configuration has index 0
            long br = ctx_[0].offset[1] + 0;
            out.closed.push_back({c.rep, get(c.den, bl), get(c.den, br)});
        }
        return out;
    }

  private:
    Context make_context(int k)
    {
        Context c;
        c.k = k;
        for (auto& m : models_) {
            c.offset.push_back(c.total);
            std::vector<State> sts;
            long cnt = m.states(k);
            for (long i = 0; i < cnt; ++i) {
                State s;
                long r = i;
                s.eta.resize(k);
                for (int j = 0; j < k; ++j) {
                    s.eta[j] = static_cast<int>(r % m.s.n);
                    r /= m.s.n;
                }
                s.ci = static_cast<int>(r);
                sts.push_back(s);
            }
            c.total += cnt;
            c.st.push_back(std::move(sts));
        }
        return c;
    }

    long index_of(int k, int model, int ci, const std::vector<int>& eta) const
    {
        long i = ci;
        for (int j = k; j-- > 0;) i = i * models_[model].s.n + eta[j];
        return ctx_[k].offset[model] + i;
    }

    static bool get(const Bits& b, long i) { return b[i >> 6] >> (i & 63) & 1; }
    static void set(Bits& b, long i) { b[i >> 6] |= std::uint64_t{1} << (i & 63); }
    Bits empty(int k) const { return Bits((ctx_[k].total + 63) / 64, 0); }
    Bits full(int k) const
    {
        Bits b = empty(k);
        for (long i = 0; i < ctx_[k].total; ++i) set(b, i);
        return b;
    }

    Bits legal_bits(int k, unsigned mask) const
    {
        Bits b = empty(k);
        for (int m = 0; m < 2; ++m) {
            const auto& s = models_[m].s;
            for (std::size_t i = 0; i < ctx_[k].st[m].size(); ++i) {
                const State& st = ctx_[k].st[m][i];
                std::vector<int> evs = ids(models_[m].cfgs[st.ci]);
                for (int j = 0; j < k; ++j)
                    if (mask >> j & 1) evs.push_back(st.eta[j]);
                bool ok = true;
                for (int x : evs)
                    for (int y : evs)
                        if (s.cf[x][y]) ok = false;
                if (ok) set(b, ctx_[k].offset[m] + static_cast<long>(i));
            }
        }
        return b;
    }

    Bits lift(const Bits& den0, int k) const
    {
        Bits b = empty(k);
        for (int m = 0; m < 2; ++m)
            for (std::size_t i = 0; i < ctx_[k].st[m].size(); ++i)
                if (get(den0, ctx_[0].offset[m] + ctx_[k].st[m][i].ci)) set(b, ctx_[k].offset[m] + static_cast<long>(i));
        return b;
    }

    void add(int k, unsigned fv, Bits den, tcw::Formula rep)
    {
        auto key = std::make_pair(fv, den);
        if (!seen_[k].insert(key).second) return;
        classes_[k].push_back({fv, std::move(den), std::move(rep)});
    }

    Bits neg(int k, const Class& c) const
    {
        Bits b = lp_[k][c.fv];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] &= ~c.den[i];
        return b;
    }

    Bits conj(int k, const Class& x, const Class& y) const
    {
        Bits b = lp_[k][x.fv | y.fv];
        for (std::size_t i = 0; i < b.size(); ++i) b[i] &= x.den[i] & y.den[i];
        return b;
    }

    Bits exec(int k, int var, const Class& c) const
    {
        Bits b = empty(k);
        for (int m = 0; m < 2; ++m) {
            const Model& md = models_[m];
            for (std::size_t i = 0; i < ctx_[k].st[m].size(); ++i) {
                const State& st = ctx_[k].st[m][i];
                int e = st.eta[var];
                if (!(md.en[st.ci] >> e & 1)) continue;
                int ci = md.index.at(md.cfgs[st.ci] | Set{1} << e);
                if (get(c.den, index_of(k, m, ci, st.eta))) set(b, ctx_[k].offset[m] + static_cast<long>(i));
            }
        }
        return b;
    }

    // Binder at context k binding variable k over a body in context k+1.
    Bits bind(int k, unsigned xs, unsigned ys, const std::string& label, const Class& body, bool run_after,
              unsigned result_fv) const
    {
        Bits b = empty(k);
        unsigned ctx = body.fv & ~(1u << k);
        for (int m = 0; m < 2; ++m) {
            const Model& md = models_[m];
            const Structure& s = md.s;
            for (std::size_t i = 0; i < ctx_[k].st[m].size(); ++i) {
                long here = ctx_[k].offset[m] + static_cast<long>(i);
                if (!get(lp_[k][result_fv], here)) continue;
                const State& st = ctx_[k].st[m][i];
                bool found = false;
                for (int e : ids(md.res[st.ci])) {
                    if (s.label[e] != label) continue;
                    bool ok = true;
                    for (int j = 0; j < k && ok; ++j) {
                        int v = st.eta[j];
                        if ((ctx >> j & 1) && s.cf[v][e]) ok = false;
                        if ((xs >> j & 1) && !s.lt[v][e]) ok = false;
                        if ((ys >> j & 1) && !conc(s, v, e)) ok = false;
                    }
                    if (!ok) continue;
                    std::vector<int> eta = st.eta;
                    eta.push_back(e);
                    int ci = st.ci;
                    if (run_after) {
                        if (!(md.en[st.ci] >> e & 1)) continue;
                        ci = md.index.at(md.cfgs[st.ci] | Set{1} << e);
                    }
                    if (get(body.den, index_of(k + 1, m, ci, eta))) {
                        found = true;
                        break;
                    }
                }
                if (found) set(b, here);
            }
        }
        return b;
    }

    Bits step_mod(const std::vector<std::string>& ls, const Class& body) const
    {
        Bits b = empty(0);
        for (int m = 0; m < 2; ++m) {
            const Model& md = models_[m];
            for (std::size_t ci = 0; ci < md.cfgs.size(); ++ci) {
                Set en = md.en[ci];
                bool found = false;
                for (Set x = en; x != 0 && !found; x = (x - 1) & en) {
                    auto v = ids(x);
                    if (v.size() != ls.size()) continue;
                    std::vector<std::string> got;
                    bool ok = true;
                    for (int p : v) {
                        got.push_back(md.s.label[p]);
                        for (int q : v)
                            if (p != q && !conc(md.s, p, q)) ok = false;
                    }
                    std::sort(got.begin(), got.end());
                    if (!ok || got != ls) continue;
                    int to = md.index.at(md.cfgs[ci] | x);
                    if (get(body.den, ctx_[0].offset[m] + to)) found = true;
                }
                if (found) set(b, ctx_[0].offset[m] + static_cast<long>(ci));
            }
        }
        return b;
    }

    static std::string var(int j) { return "v" + std::to_string(j + 1); }

    // Variables of mask in index order.
    static std::vector<std::string> vars_of(unsigned mask, int k)
    {
        std::vector<std::string> out;
        for (int j = 0; j < k; ++j)
            if (mask >> j & 1) out.push_back(var(j));
        return out;
    }

    void label_multisets(std::size_t size, std::size_t from, std::vector<std::string>& cur,
                         std::vector<std::vector<std::string>>& out) const
    {
        if (cur.size() == size) {
            out.push_back(cur);
            return;
        }
        for (std::size_t i = from; i < labels_.size(); ++i) {
            cur.push_back(labels_[i]);
            label_multisets(size, i, cur, out);
            cur.pop_back();
        }
    }

    void grow(int d, int k, const std::vector<std::size_t>& prev)
    {
        bool boolean_open = frag_ == Frag::HM || frag_ == Frag::Step || frag_ == Frag::HP || frag_ == Frag::Full;
        std::vector<Class> base(classes_[k].begin(), classes_[k].begin() + static_cast<long>(prev[k]));
        if (boolean_open || k == 0) {
            for (const auto& c : base) {
                if (!boolean_open && c.fv != 0) continue;
                add(k, c.fv, neg(k, c), tcw::Formula::neg(c.rep));
            }
            for (std::size_t i = 0; i < base.size(); ++i)
                for (std::size_t j = i; j < base.size(); ++j) {
                    if (!boolean_open && (base[i].fv != 0 || base[j].fv != 0)) continue;
                    add(k, base[i].fv | base[j].fv, conj(k, base[i], base[j]), tcw::Formula::conj(base[i].rep, base[j].rep));
                }
        }
        if (frag_ == Frag::Step) {
            std::vector<std::vector<std::string>> multis;
            for (int sz = 1; sz <= max_n_; ++sz) {
                std::vector<std::string> cur;
                label_multisets(static_cast<std::size_t>(sz), 0, cur, multis);
            }
            for (const auto& ls : multis)
                for (const auto& c : base) {
                    std::vector<tcw::Binder> bs;
                    for (std::size_t i = 0; i < ls.size(); ++i) bs.push_back({{}, {}, ls[i], "s" + std::to_string(i + 1)});
                    add(0, 0, step_mod(ls, c), tcw::Formula::exec_step(bs, c.rep));
                }
            return;
        }
        if (frag_ == Frag::Full)
            for (int j = 0; j < k; ++j)
                for (const auto& c : base)
                    add(k, c.fv | 1u << j, exec(k, j, c), tcw::Formula::exec(var(j), c.rep));

        // Binders over the previous level of context k+1.
        if (static_cast<std::size_t>(k + 1) >= ctx_.size()) return;
        std::vector<Class> inner;
        if (frag_ == Frag::HM) {
            for (const auto& c : base) inner.push_back({0, lift(c.den, 1), c.rep});
        } else {
            inner.assign(classes_[k + 1].begin(), classes_[k + 1].begin() + static_cast<long>(prev[k + 1]));
        }
        bool run_after = frag_ != Frag::Full;
        for (unsigned xs = 0; xs < (1u << k); ++xs)
            for (unsigned ys = 0; ys < (1u << k); ++ys) {
                if (xs & ys) continue;
                if (frag_ == Frag::HM && (xs | ys)) continue;
                for (const auto& l : labels_)
                    for (const auto& c : inner) {
                        unsigned fv = xs | ys | (c.fv & ~(1u << k));
                        tcw::Binder bd{vars_of(xs, k), vars_of(ys, k), l, var(k)};
                        tcw::Formula rep = run_after ? tcw::Formula::exec_bind(bd, c.rep) : tcw::Formula::bind(bd, c.rep);
                        add(k, fv, bind(k, xs, ys, l, c, run_after, fv), rep);
                    }
            }
        (void)d;
    }

    Frag frag_;
    int depth_;
    int max_n_ = 0;
    std::vector<Model> models_;
    std::vector<std::string> labels_;
    std::vector<Context> ctx_;
    std::vector<std::vector<Class>> classes_;
    std::vector<std::unordered_set<std::pair<unsigned, Bits>, KeyHash>> seen_;
    std::vector<std::vector<Bits>> lp_;
};

} // namespace

Enumeration enumerate(const tcw::Pes& a, const tcw::Pes& b, Frag f, int depth)
{
    return Enumerator(a, b, f, depth).run();
}

} // namespace ref
