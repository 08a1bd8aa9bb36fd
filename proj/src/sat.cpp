#include "eccprove/sat.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

#include "eccprove/error.hpp"

namespace eccprove::sat {

const char* to_string(Status s) {
    switch (s) {
        case Status::Sat: return "SAT";
        case Status::Unsat: return "UNSAT";
        case Status::Unknown: return "UNKNOWN";
    }
    return "?";
}

bool normalize_clause(Clause& c) {
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i].var() == c[i - 1].var()) return false;
    return true;
}

std::string export_dimacs(const Cnf& cnf) {
    std::ostringstream os;
    os << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << '\n';
    for (const auto& c : cnf.clauses) {
        for (Lit l : c) os << l.to_dimacs() << ' ';
        os << "0\n";
    }
    return os.str();
}

Cnf import_dimacs(std::string_view text) {
    std::istringstream is{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    std::size_t declared_clauses = 0;
    Cnf cnf;
    Clause current;
    std::size_t open_line = 0;
    while (std::getline(is, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (tok == "c" || tok[0] == 'c') continue;
        if (tok == "%") break;  // SATLIB trailer
        if (tok == "p") {
            if (have_header) throw ParseError(lineno, "duplicate problem line");
            std::string fmt;
            long long v = -1, c = -1;
            if (!(ls >> fmt >> v >> c) || fmt != "cnf" || v < 0 || c < 0)
                throw ParseError(lineno, "expected 'p cnf <vars> <clauses>'");
            std::string extra;
            if (ls >> extra) throw ParseError(lineno, "trailing text after problem line");
            cnf.num_vars = static_cast<std::size_t>(v);
            declared_clauses = static_cast<std::size_t>(c);
            have_header = true;
            continue;
        }
        if (!have_header) throw ParseError(lineno, "clause before 'p cnf' header");
        do {
            long long d = 0;
            std::size_t used = 0;
            try {
                d = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) throw ParseError(lineno, "bad literal '" + tok + "'");
            if (d == 0) {
                cnf.clauses.push_back(std::move(current));
                current.clear();
                continue;
            }
            const long long var = d < 0 ? -d : d;
            if (static_cast<std::size_t>(var) > cnf.num_vars)
                throw ParseError(lineno, "literal " + tok + " exceeds declared variable count");
            if (current.empty()) open_line = lineno;
            current.push_back(Lit::from_dimacs(static_cast<int>(d)));
        } while (ls >> tok);
    }
    if (!have_header) throw ParseError(lineno == 0 ? 1 : lineno, "missing 'p cnf' header");
    if (!current.empty()) throw ParseError(open_line, "clause not terminated by 0");
    if (cnf.clauses.size() != declared_clauses)
        throw ParseError(lineno, "header declares " + std::to_string(declared_clauses) + " clauses, found " +
                                     std::to_string(cnf.clauses.size()));
    return cnf;
}

// ---------------------------------------------------------------------------

Solver::Solver(SolverOptions opts) : opts_(opts), rng_(opts.seed) {}

Var Solver::new_var() {
    const Var v = static_cast<Var>(assigns_.size());
    assigns_.push_back(kUndef);
    polarity_.push_back(1);
    var_level_.push_back(0);
    reason_.push_back(kNoReason);
    double a = 0.0;
    if (opts_.seed != 0) a = std::uniform_real_distribution<double>(0.0, 1e-5)(rng_);
    activity_.push_back(a);
    seen_.push_back(0);
    watches_.emplace_back();
    watches_.emplace_back();
    heap_index_.push_back(-1);
    heap_insert(v);
    return v;
}

bool Solver::add_clause(std::span<const Lit> in) {
    Clause c(in.begin(), in.end());
    for (Lit l : c)
        if (l.var() >= num_vars()) throw InvalidInput("add_clause: unallocated variable " + std::to_string(l.var() + 1));
    if (!normalize_clause(c)) return ok_;
    if (opts_.keep_original) original_.push_back(c);
    if (!ok_) return false;
    if (level() != 0) cancel_until(0);

    Clause live;
    for (Lit l : c) {
        const auto v = value(l);
        if (v == kTrue && var_level_[l.var()] == 0) return true;
        if (v == kFalse && var_level_[l.var()] == 0) continue;
        live.push_back(l);
    }
    if (live.empty()) return ok_ = false;
    if (live.size() == 1) {
        enqueue(live[0], kNoReason);
        if (propagate() != kNoReason) ok_ = false;
        return ok_;
    }
    attach(alloc_clause(live, false));
    return true;
}

Solver::CRef Solver::alloc_clause(std::span<const Lit> ls, bool learnt) {
    const CRef c = static_cast<CRef>(headers_.size());
    headers_.push_back({static_cast<std::uint32_t>(arena_.size()), static_cast<std::uint32_t>(ls.size()), 0.0f, learnt,
                        false});
    arena_.insert(arena_.end(), ls.begin(), ls.end());
    return c;
}

void Solver::attach(CRef c) {
    const Lit* l = lits(c);
    watches_[(~l[0]).index()].push_back({c, l[1]});
    watches_[(~l[1]).index()].push_back({c, l[0]});
}

void Solver::enqueue(Lit l, CRef reason) {
    assigns_[l.var()] = l.negated() ? kFalse : kTrue;
    var_level_[l.var()] = level();
    reason_[l.var()] = reason;
    trail_.push_back(l);
}

Solver::CRef Solver::propagate() {
    CRef confl = kNoReason;
    while (qhead_ < trail_.size()) {
        const Lit p = trail_[qhead_++];
        auto& ws = watches_[p.index()];
        ++total_.propagations;
        const Lit false_lit = ~p;
        std::size_t i = 0, j = 0;
        while (i < ws.size()) {
            const Watcher w = ws[i];
            if (value(w.blocker) == kTrue) {
                ws[j++] = ws[i++];
                continue;
            }
            const CRef cr = w.cref;
            if (headers_[cr].deleted) {
                ++i;
                continue;
            }
            Lit* c = lits(cr);
            const std::uint32_t size = headers_[cr].size;
            if (c[0] == false_lit) std::swap(c[0], c[1]);
            ++i;
            const Lit first = c[0];
            const Watcher nw{cr, first};
            if (first != w.blocker && value(first) == kTrue) {
                ws[j++] = nw;
                continue;
            }
            bool moved = false;
            for (std::uint32_t k = 2; k < size; ++k) {
                if (value(c[k]) != kFalse) {
                    c[1] = c[k];
                    c[k] = false_lit;
                    watches_[(~c[1]).index()].push_back(nw);
                    moved = true;
                    break;
                }
            }
            if (moved) continue;
            ws[j++] = nw;
            if (value(first) == kFalse) {
                confl = cr;
                qhead_ = trail_.size();
                while (i < ws.size()) ws[j++] = ws[i++];
            } else {
                enqueue(first, cr);
            }
        }
        ws.resize(j);
        if (confl != kNoReason) break;
    }
    return confl;
}

void Solver::analyze(CRef confl, std::vector<Lit>& out_learnt, std::uint32_t& out_btlevel) {
    int path_count = 0;
    Lit p;
    bool have_p = false;
    out_learnt.clear();
    out_learnt.emplace_back();
    std::size_t index = trail_.size();

    do {
        if (headers_[confl].learnt) bump_clause(confl);
        const Lit* c = lits(confl);
        const std::uint32_t size = headers_[confl].size;
        for (std::uint32_t j = have_p ? 1 : 0; j < size; ++j) {
            const Lit q = c[j];
            const Var v = q.var();
            if (!seen_[v] && var_level_[v] > 0) {
                bump_var(v);
                seen_[v] = 1;
                if (var_level_[v] >= level())
                    ++path_count;
                else
                    out_learnt.push_back(q);
            }
        }
        while (!seen_[trail_[--index].var()]) {
        }
        p = trail_[index];
        have_p = true;
        confl = reason_[p.var()];
        seen_[p.var()] = 0;
        --path_count;
    } while (path_count > 0);
    out_learnt[0] = ~p;

    analyze_toclear_ = out_learnt;
    std::uint32_t abstract = 0;
    for (std::size_t i = 1; i < out_learnt.size(); ++i) abstract |= abstract_level(out_learnt[i].var());
    std::size_t j = 1;
    for (std::size_t i = 1; i < out_learnt.size(); ++i)
        if (reason_[out_learnt[i].var()] == kNoReason || !lit_redundant(out_learnt[i], abstract))
            out_learnt[j++] = out_learnt[i];
    out_learnt.resize(j);

    if (out_learnt.size() == 1) {
        out_btlevel = 0;
    } else {
        std::size_t max_i = 1;
        for (std::size_t i = 2; i < out_learnt.size(); ++i)
            if (var_level_[out_learnt[i].var()] > var_level_[out_learnt[max_i].var()]) max_i = i;
        std::swap(out_learnt[1], out_learnt[max_i]);
        out_btlevel = var_level_[out_learnt[1].var()];
    }
    for (Lit l : analyze_toclear_) seen_[l.var()] = 0;
}

bool Solver::lit_redundant(Lit p, std::uint32_t abstract_levels) {
    analyze_stack_.clear();
    analyze_stack_.push_back(p);
    const std::size_t top = analyze_toclear_.size();
    while (!analyze_stack_.empty()) {
        const Lit q = analyze_stack_.back();
        analyze_stack_.pop_back();
        const CRef c = reason_[q.var()];
        const Lit* cl = lits(c);
        for (std::uint32_t i = 1; i < headers_[c].size; ++i) {
            const Lit l = cl[i];
            const Var v = l.var();
            if (!seen_[v] && var_level_[v] > 0) {
                if (reason_[v] != kNoReason && (abstract_level(v) & abstract_levels) != 0) {
                    seen_[v] = 1;
                    analyze_stack_.push_back(l);
                    analyze_toclear_.push_back(l);
                } else {
                    for (std::size_t j = top; j < analyze_toclear_.size(); ++j) seen_[analyze_toclear_[j].var()] = 0;
                    analyze_toclear_.resize(top);
                    return false;
                }
            }
        }
    }
    return true;
}

void Solver::analyze_final(Lit a, std::vector<Lit>& out_core) {
    out_core.clear();
    out_core.push_back(a);
    if (level() == 0) return;
    seen_[a.var()] = 1;
    for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
        const Var v = trail_[i].var();
        if (!seen_[v]) continue;
        if (reason_[v] == kNoReason) {
            out_core.push_back(trail_[i]);
        } else {
            const Lit* c = lits(reason_[v]);
            for (std::uint32_t j = 1; j < headers_[reason_[v]].size; ++j)
                if (var_level_[c[j].var()] > 0) seen_[c[j].var()] = 1;
        }
        seen_[v] = 0;
    }
    seen_[a.var()] = 0;
}

void Solver::cancel_until(std::uint32_t lvl) {
    if (level() <= lvl) return;
    for (std::size_t c = trail_.size(); c-- > trail_lim_[lvl];) {
        const Var v = trail_[c].var();
        assigns_[v] = kUndef;
        reason_[v] = kNoReason;
        polarity_[v] = trail_[c].negated() ? 1 : 0;
        heap_insert(v);
    }
    qhead_ = trail_lim_[lvl];
    trail_.resize(trail_lim_[lvl]);
    trail_lim_.resize(lvl);
}

Lit Solver::pick_branch() {
    while (!heap_.empty()) {
        const Var v = heap_pop();
        if (assigns_[v] == kUndef) return Lit(v, polarity_[v] != 0);
    }
    return Lit::from_index(0xffffffffu);
}

void Solver::bump_var(Var v) {
    activity_[v] += var_inc_;
    if (activity_[v] > 1e100) {
        for (auto& a : activity_) a *= 1e-100;
        var_inc_ *= 1e-100;
    }
    if (heap_contains(v)) heap_up(static_cast<std::size_t>(heap_index_[v]));
}

void Solver::bump_clause(CRef c) {
    headers_[c].activity += static_cast<float>(cla_inc_);
    if (headers_[c].activity > 1e20f) {
        for (CRef l : learnts_) headers_[l].activity *= 1e-20f;
        cla_inc_ *= 1e-20;
    }
}

bool Solver::locked(CRef c) const {
    const Lit l0 = lits(c)[0];
    return reason_[l0.var()] == c && value(l0) == kTrue;
}

void Solver::reduce_db() {
    std::sort(learnts_.begin(), learnts_.end(), [this](CRef a, CRef b) {
        const bool a_bin = headers_[a].size == 2, b_bin = headers_[b].size == 2;
        if (a_bin != b_bin) return !a_bin;
        if (headers_[a].activity != headers_[b].activity) return headers_[a].activity < headers_[b].activity;
        return a < b;
    });
    const double extra_lim = cla_inc_ / static_cast<double>(std::max<std::size_t>(learnts_.size(), 1));
    std::size_t j = 0;
    for (std::size_t i = 0; i < learnts_.size(); ++i) {
        const CRef c = learnts_[i];
        const bool removable = headers_[c].size > 2 && !locked(c) &&
                               (i < learnts_.size() / 2 || headers_[c].activity < extra_lim);
        if (removable) {
            headers_[c].deleted = true;
            wasted_ += headers_[c].size;
        } else {
            learnts_[j++] = c;
        }
    }
    learnts_.resize(j);
    if (wasted_ * 2 > arena_.size()) collect_garbage();
}

void Solver::collect_garbage() {
    std::vector<Lit> arena;
    std::vector<ClauseHeader> headers;
    std::vector<CRef> remap(headers_.size(), kNoReason);
    arena.reserve(arena_.size() - wasted_);
    for (CRef c = 0; c < headers_.size(); ++c) {
        if (headers_[c].deleted) continue;
        remap[c] = static_cast<CRef>(headers.size());
        ClauseHeader h = headers_[c];
        h.start = static_cast<std::uint32_t>(arena.size());
        arena.insert(arena.end(), lits(c), lits(c) + headers_[c].size);
        headers.push_back(h);
    }
    for (auto& r : reason_)
        if (r != kNoReason) r = remap[r];
    for (auto& l : learnts_) l = remap[l];
    arena_ = std::move(arena);
    headers_ = std::move(headers);
    wasted_ = 0;
    for (auto& w : watches_) w.clear();
    for (CRef c = 0; c < headers_.size(); ++c) attach(c);
}

void Solver::heap_insert(Var v) {
    if (heap_contains(v)) return;
    heap_index_[v] = static_cast<std::int64_t>(heap_.size());
    heap_.push_back(v);
    heap_up(heap_.size() - 1);
}

void Solver::heap_up(std::size_t i) {
    const Var v = heap_[i];
    auto before = [this](Var a, Var b) { return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b); };
    while (i > 0) {
        const std::size_t parent = (i - 1) / 2;
        if (!before(v, heap_[parent])) break;
        heap_[i] = heap_[parent];
        heap_index_[heap_[i]] = static_cast<std::int64_t>(i);
        i = parent;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<std::int64_t>(i);
}

void Solver::heap_down(std::size_t i) {
    const Var v = heap_[i];
    auto before = [this](Var a, Var b) { return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b); };
    for (;;) {
        const std::size_t l = 2 * i + 1;
        if (l >= heap_.size()) break;
        const std::size_t r = l + 1;
        const std::size_t child = (r < heap_.size() && before(heap_[r], heap_[l])) ? r : l;
        if (!before(heap_[child], v)) break;
        heap_[i] = heap_[child];
        heap_index_[heap_[i]] = static_cast<std::int64_t>(i);
        i = child;
    }
    heap_[i] = v;
    heap_index_[v] = static_cast<std::int64_t>(i);
}

Var Solver::heap_pop() {
    const Var top = heap_.front();
    heap_index_[top] = -1;
    const Var last = heap_.back();
    heap_.pop_back();
    if (!heap_.empty()) {
        heap_[0] = last;
        heap_index_[last] = 0;
        heap_down(0);
    }
    return top;
}

SolveResult Solver::solve(std::span<const Lit> assumptions) {
    const auto t0 = std::chrono::steady_clock::now();
    const Stats before = total_;
    SolveResult res;
    auto finish = [&](Status s) {
        res.status = s;
        res.stats.conflicts = total_.conflicts - before.conflicts;
        res.stats.decisions = total_.decisions - before.decisions;
        res.stats.propagations = total_.propagations - before.propagations;
        res.stats.restarts = total_.restarts - before.restarts;
        res.stats.learnt_clauses = total_.learnt_clauses - before.learnt_clauses;
        res.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        total_.wall_ms += res.stats.wall_ms;
        return res;
    };
    for (Lit a : assumptions)
        if (a.var() >= num_vars()) throw InvalidInput("solve: assumption on unallocated variable");
    if (!ok_) return finish(Status::Unsat);

    max_learnts_ = std::max<double>(static_cast<double>(headers_.size() - learnts_.size()) / 3.0, 2000.0);
    double restart_limit = static_cast<double>(opts_.restart_base);
    std::vector<Lit> learnt;

    for (;;) {
        std::uint64_t conflicts_here = 0;
        for (;;) {
            const CRef confl = propagate();
            if (confl != kNoReason) {
                ++total_.conflicts;
                ++conflicts_here;
                if (level() == 0) {
                    ok_ = false;
                    return finish(Status::Unsat);
                }
                std::uint32_t bt = 0;
                analyze(confl, learnt, bt);
                cancel_until(bt);
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    const CRef cr = alloc_clause(learnt, true);
                    learnts_.push_back(cr);
                    attach(cr);
                    bump_clause(cr);
                    enqueue(learnt[0], cr);
                }
                ++total_.learnt_clauses;
                var_inc_ /= opts_.var_decay;
                cla_inc_ /= opts_.clause_decay;
                if (opts_.conflict_budget != 0 && total_.conflicts - before.conflicts >= opts_.conflict_budget) {
                    cancel_until(0);
                    return finish(Status::Unknown);
                }
                continue;
            }
            if (opts_.conflict_budget != 0 && total_.conflicts - before.conflicts >= opts_.conflict_budget) {
                cancel_until(0);
                return finish(Status::Unknown);
            }
            if (static_cast<double>(conflicts_here) >= restart_limit) break;
            if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_) reduce_db();

            bool have_next = false;
            Lit next;
            while (level() < assumptions.size()) {
                const Lit a = assumptions[level()];
                if (value(a) == kTrue) {
                    trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
                } else if (value(a) == kFalse) {
                    analyze_final(a, res.core);
                    cancel_until(0);
                    return finish(Status::Unsat);
                } else {
                    next = a;
                    have_next = true;
                    break;
                }
            }
            if (!have_next) {
                ++total_.decisions;
                next = pick_branch();
                if (next.index() == 0xffffffffu) {
                    res.model.resize(num_vars());
                    for (Var v = 0; v < num_vars(); ++v) res.model[v] = assigns_[v] == kTrue;
                    cancel_until(0);
                    return finish(Status::Sat);
                }
            }
            trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
            enqueue(next, kNoReason);
        }
        cancel_until(0);
        ++total_.restarts;
        restart_limit *= opts_.restart_factor;
        max_learnts_ *= 1.1;
    }
}

Cnf Solver::original_cnf() const { return {num_vars(), original_}; }

std::vector<Clause> Solver::learnt_clauses() const {
    std::vector<Clause> out;
    for (CRef c : learnts_) out.emplace_back(lits(c), lits(c) + headers_[c].size);
    return out;
}

bool Solver::satisfies_original(const std::vector<bool>& model) const {
    if (model.size() < num_vars()) return false;
    for (const auto& c : original_) {
        bool sat = false;
        for (Lit l : c)
            if (model[l.var()] != l.negated()) {
                sat = true;
                break;
            }
        if (!sat) return false;
    }
    return true;
}

}  // namespace eccprove::sat
