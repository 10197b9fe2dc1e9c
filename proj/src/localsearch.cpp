#include "amvrp/localsearch.hpp"

#include <algorithm>
#include <numeric>

namespace amvrp {

Improver::Improver(const Evaluator& ev, Plan plan) : ev_(&ev), plan_(std::move(plan)) {
  plan_.resize(ev.vehicle_count());
  vs_.assign(plan_.size(), Score{});
  for (std::size_t v = 0; v < plan_.size(); ++v) {
    auto& drives = plan_[v];
    drives.erase(std::remove_if(drives.begin(), drives.end(), [](const auto& d) { return d.empty(); }),
                 drives.end());
    vs_[v] = eval(static_cast<int>(v), drives);
  }
  refresh();
}

Score Improver::eval(int v, const std::vector<std::vector<int>>& drives) {
  if (drives.empty()) return {};
  spans_.assign(drives.begin(), drives.end());
  return score_of(ev_->evaluate_vehicle(v, spans_));
}

void Improver::commit(int v, std::vector<std::vector<int>> drives, Score s) {
  drives.erase(std::remove_if(drives.begin(), drives.end(), [](const auto& d) { return d.empty(); }),
               drives.end());
  plan_[v] = std::move(drives);
  vs_[v] = s;
}

void Improver::refresh() {
  total_ = {};
  for (const auto& s : vs_) total_ = total_ + s;
  positions_.clear();
  targets_.clear();
  dm_.assign(plan_.size(), {});
  dvol_.assign(plan_.size(), {});
  for (int v = 0; v < static_cast<int>(plan_.size()); ++v) {
    const auto& drives = plan_[v];
    for (int d = 0; d < static_cast<int>(drives.size()); ++d) {
      double m = 0.0, vol = 0.0;
      for (int p = 0; p < static_cast<int>(drives[d].size()); ++p) {
        positions_.push_back({v, d, p});
        m += ev_->token_mass(drives[d][p]);
        vol += ev_->token_volume(drives[d][p]);
      }
      dm_[v].push_back(m);
      dvol_[v].push_back(vol);
      for (int q = 0; q <= static_cast<int>(drives[d].size()); ++q) targets_.push_back({0, v, d, q});
    }
    if (!drives.empty())
      for (int s = 0; s <= static_cast<int>(drives.size()); ++s) targets_.push_back({1, v, s, 0});
  }
  for (int c = 0; c < ev_->class_count(); ++c)
    for (int w : ev_->class_members(c))
      if (plan_[w].empty()) {
        targets_.push_back({2, w, 0, 0});
        break;
      }
}

double Improver::group_mass(const Group& g, int g_s) const {
  double m = 0.0;
  for (int t = 0; t < g_s; ++t) m += ev_->token_mass(plan_[g.v][g.d][g.p + t]);
  return m;
}

double Improver::group_volume(const Group& g, int g_s) const {
  double m = 0.0;
  for (int t = 0; t < g_s; ++t) m += ev_->token_volume(plan_[g.v][g.d][g.p + t]);
  return m;
}

bool Improver::group_compatible(const Group& g, int g_s, int w) const {
  for (int t = 0; t < g_s; ++t)
    if (!ev_->compatible(w, plan_[g.v][g.d][g.p + t])) return false;
  return true;
}

std::vector<Improver::Group> Improver::group_starts(int g_s) const {
  std::vector<Group> out;
  for (const auto& g : positions_)
    if (g.p + g_s <= static_cast<int>(plan_[g.v][g.d].size())) out.push_back(g);
  return out;
}

bool Improver::overlaps(const Group& a, const Group& b, int g_s) const {
  return a.v == b.v && a.d == b.d && a.p < b.p + g_s && b.p < a.p + g_s;
}

bool Improver::swap_vertices(int g_n, int g_s, int combos, Rng* rng) {
  if (g_n < 2 || g_n > 3 || g_s < 1) return false;
  const auto starts = group_starts(g_s);
  if (static_cast<int>(starts.size()) < g_n) return false;

  std::array<Group, 3> G{};
  std::array<int, 3> perm{};
  std::array<double, 3> gm{}, gv{};
  std::array<std::vector<std::vector<int>>*, 3> trials{&trial_a_, &trial_b_, &trial_c_};
  std::array<int, 3> tv{};
  int ntv = 0;

  bool found = false;
  Score best = total_;
  std::array<Group, 3> best_g{};
  std::array<int, 3> best_perm{};

  auto trial_for = [&](int v) -> std::vector<std::vector<int>>& {
    for (int k = 0; k < ntv; ++k)
      if (tv[k] == v) return *trials[k];
    tv[ntv] = v;
    *trials[ntv] = plan_[v];
    return *trials[ntv++];
  };
  auto build = [&]() {
    ntv = 0;
    for (int k = 0; k < g_n; ++k) {
      auto& tr = trial_for(G[k].v);
      const auto& src = G[perm[k]];
      for (int t = 0; t < g_s; ++t) tr[G[k].d][G[k].p + t] = plan_[src.v][src.d][src.p + t];
    }
  };
  // Capacity and skill screen; only valid while the current plan is feasible.
  auto admissible = [&]() {
    if (!feasible()) return true;
    for (int k = 0; k < g_n; ++k) {
      const auto& src = G[perm[k]];
      if (src.v != G[k].v && !group_compatible(src, g_s, G[k].v)) return false;
    }
    for (int k = 0; k < g_n; ++k) {
      bool first = true;
      for (int l = 0; l < k; ++l)
        if (G[l].v == G[k].v && G[l].d == G[k].d) first = false;
      if (!first) continue;
      double m = dm_[G[k].v][G[k].d], vol = dvol_[G[k].v][G[k].d];
      for (int l = 0; l < g_n; ++l)
        if (G[l].v == G[k].v && G[l].d == G[k].d) {
          m += gm[perm[l]] - gm[l];
          vol += gv[perm[l]] - gv[l];
        }
      if (!ev_->fits(G[k].v, m, vol)) return false;
    }
    return true;
  };
  // Returns true when the caller should stop scanning.
  auto consider = [&]() {
    for (int k = 0; k < g_n; ++k) {
      gm[k] = group_mass(G[k], g_s);
      gv[k] = group_volume(G[k], g_s);
    }
    std::array<int, 3> p{0, 1, 2};
    while (std::next_permutation(p.begin(), p.begin() + g_n)) {
      perm = p;
      if (!admissible()) continue;
      build();
      Score s = total_;
      for (int k = 0; k < ntv; ++k) s = s - vs_[tv[k]] + eval(tv[k], *trials[k]);
      if (s.better_than(best)) {
        found = true;
        best = s;
        best_g = G;
        best_perm = perm;
        if (first_improvement_ && combos <= 0) return true;
      }
    }
    return false;
  };

  const int n = static_cast<int>(starts.size());
  if (combos > 0) {
    for (int c = 0; c < combos; ++c) {
      bool ok = true;
      for (int k = 0; k < g_n && ok; ++k) {
        G[k] = starts[rng->below(starts.size())];
        for (int l = 0; l < k && ok; ++l) ok = !overlaps(G[k], G[l], g_s);
      }
      if (ok) consider();
    }
  } else if (g_n == 2) {
    const std::size_t off = cursor_ % static_cast<std::size_t>(n);
    bool stop = false;
    for (int ii = 0; ii < n && !stop; ++ii) {
      const int i = static_cast<int>((ii + off) % n);
      G[0] = starts[i];
      for (int j = i + 1; j < n && !stop; ++j) {
        G[1] = starts[j];
        if (overlaps(G[0], G[1], g_s)) continue;
        stop = consider();
      }
      if (stop) cursor_ = static_cast<std::size_t>(i);
    }
  } else {
    bool stop = false;
    for (int i = 0; i < n && !stop; ++i)
      for (int j = i + 1; j < n && !stop; ++j) {
        if (overlaps(starts[i], starts[j], g_s)) continue;
        for (int k = j + 1; k < n && !stop; ++k) {
          if (overlaps(starts[i], starts[k], g_s) || overlaps(starts[j], starts[k], g_s)) continue;
          G = {starts[i], starts[j], starts[k]};
          stop = consider();
        }
      }
  }
  if (!found) return false;

  G = best_g;
  perm = best_perm;
  build();
  for (int k = 0; k < ntv; ++k) {
    const Score s = eval(tv[k], *trials[k]);
    commit(tv[k], *trials[k], s);
  }
  refresh();
  return true;
}

bool Improver::build_move(const Group& g, int g_s, const Target& t) {
  const int v = g.v;
  const auto& src = plan_[v][g.d];
  const int len = static_cast<int>(src.size());
  trial_va_ = v;
  trial_vb_ = -1;
  auto take = [&](std::vector<int>& drive, int p) {
    drive.erase(drive.begin() + p, drive.begin() + p + g_s);
  };
  auto group_begin = src.begin() + g.p;
  auto group_end = group_begin + g_s;

  if (t.kind == 0 && t.w == v && t.e == g.d) {
    if (t.q > len - g_s || t.q == g.p) return false;
    trial_a_ = plan_[v];
    auto& dr = trial_a_[g.d];
    take(dr, g.p);
    dr.insert(dr.begin() + t.q, group_begin, group_end);
    return true;
  }
  if (t.kind == 0 && t.w == v) {
    trial_a_ = plan_[v];
    auto& dst = trial_a_[t.e];
    dst.insert(dst.begin() + t.q, group_begin, group_end);
    take(trial_a_[g.d], g.p);
    return true;
  }
  if (t.kind == 1 && t.w == v) {
    if (g_s == len && (t.e == g.d || t.e == g.d + 1)) return false;
    trial_a_ = plan_[v];
    trial_a_.insert(trial_a_.begin() + t.e, std::vector<int>(group_begin, group_end));
    take(trial_a_[t.e <= g.d ? g.d + 1 : g.d], g.p);
    return true;
  }
  trial_a_ = plan_[v];
  take(trial_a_[g.d], g.p);
  trial_vb_ = t.w;
  trial_b_ = plan_[t.w];
  if (t.kind == 0)
    trial_b_[t.e].insert(trial_b_[t.e].begin() + t.q, group_begin, group_end);
  else
    trial_b_.insert(trial_b_.begin() + (t.kind == 1 ? t.e : 0), std::vector<int>(group_begin, group_end));
  return true;
}

bool Improver::move_vertices(int g_s, int combos, Rng* rng) {
  if (g_s < 1) return false;
  const auto starts = group_starts(g_s);
  if (starts.empty() || targets_.empty()) return false;

  bool found = false;
  Score best = total_;
  Group best_g{};
  Target best_t{};

  auto admissible = [&](const Group& g, const Target& t) {
    if (!feasible()) return true;
    if (t.w != g.v && !group_compatible(g, g_s, t.w)) return false;
    if (t.kind == 0 && !(t.w == g.v && t.e == g.d))
      return ev_->fits(t.w, dm_[t.w][t.e] + group_mass(g, g_s), dvol_[t.w][t.e] + group_volume(g, g_s));
    return true;
  };
  auto consider = [&](const Group& g, const Target& t) {
    if (!admissible(g, t) || !build_move(g, g_s, t)) return false;
    Score s = total_ - vs_[g.v] + eval(g.v, trial_a_);
    if (trial_vb_ >= 0) s = s - vs_[trial_vb_] + eval(trial_vb_, trial_b_);
    if (!s.better_than(best)) return false;
    found = true;
    best = s;
    best_g = g;
    best_t = t;
    return first_improvement_ && combos <= 0;
  };

  if (combos > 0) {
    for (int c = 0; c < combos; ++c)
      consider(starts[rng->below(starts.size())], targets_[rng->below(targets_.size())]);
  } else {
    const std::size_t n = starts.size();
    const std::size_t off = cursor_ % n;
    bool stop = false;
    for (std::size_t ii = 0; ii < n && !stop; ++ii) {
      const std::size_t i = (ii + off) % n;
      for (const auto& t : targets_)
        if ((stop = consider(starts[i], t))) break;
      if (stop) cursor_ = i;
    }
  }
  if (!found) return false;

  build_move(best_g, g_s, best_t);
  const int va = trial_va_, vb = trial_vb_;
  const Score sa = eval(va, trial_a_);
  commit(va, trial_a_, sa);
  if (vb >= 0) {
    const Score sb = eval(vb, trial_b_);
    commit(vb, trial_b_, sb);
  }
  refresh();
  return true;
}

bool Improver::swap_drives() {
  bool found = false;
  Score best = total_;
  int bv = -1, bd = -1, bw = -1, be = -1;
  const int nv = static_cast<int>(plan_.size());
  for (int v = 0; v < nv; ++v)
    for (int d = 0; d < static_cast<int>(plan_[v].size()); ++d)
      for (int w = v + 1; w < nv; ++w)
        for (int e = 0; e < static_cast<int>(plan_[w].size()); ++e) {
          if (feasible() && (!ev_->fits(v, dm_[w][e], dvol_[w][e]) || !ev_->fits(w, dm_[v][d], dvol_[v][d])))
            continue;
          trial_a_ = plan_[v];
          trial_a_[d] = plan_[w][e];
          trial_b_ = plan_[w];
          trial_b_[e] = plan_[v][d];
          const Score s = total_ - vs_[v] - vs_[w] + eval(v, trial_a_) + eval(w, trial_b_);
          if (s.better_than(best)) {
            found = true;
            best = s;
            bv = v, bd = d, bw = w, be = e;
          }
        }
  if (!found) return false;
  trial_a_ = plan_[bv];
  trial_a_[bd] = plan_[bw][be];
  trial_b_ = plan_[bw];
  trial_b_[be] = plan_[bv][bd];
  const Score sa = eval(bv, trial_a_), sb = eval(bw, trial_b_);
  commit(bv, trial_a_, sa);
  commit(bw, trial_b_, sb);
  refresh();
  return true;
}

bool Improver::move_drive() {
  bool found = false;
  Score best = total_;
  int bv = -1, bd = -1, bw = -1, bs = -1;
  const int nv = static_cast<int>(plan_.size());

  // Fills trial_a_ (and trial_b_ when w != v); returns the score delta.
  auto build = [&](int v, int d, int w, int s) {
    if (w == v) {
      trial_a_ = plan_[v];
      auto moved = std::move(trial_a_[d]);
      trial_a_.erase(trial_a_.begin() + d);
      trial_a_.insert(trial_a_.begin() + s, std::move(moved));
      return total_ - vs_[v] + eval(v, trial_a_);
    }
    trial_a_ = plan_[v];
    trial_a_.erase(trial_a_.begin() + d);
    trial_b_ = plan_[w];
    trial_b_.insert(trial_b_.begin() + s, plan_[v][d]);
    return total_ - vs_[v] - vs_[w] + eval(v, trial_a_) + eval(w, trial_b_);
  };

  std::vector<int> idle_reps;
  for (const auto& t : targets_)
    if (t.kind == 2) idle_reps.push_back(t.w);

  for (int v = 0; v < nv; ++v)
    for (int d = 0; d < static_cast<int>(plan_[v].size()); ++d) {
      auto consider = [&](int w, int s) {
        if (feasible() && w != v && !ev_->fits(w, dm_[v][d], dvol_[v][d])) return;
        const Score sc = build(v, d, w, s);
        if (sc.better_than(best)) {
          found = true;
          best = sc;
          bv = v, bd = d, bw = w, bs = s;
        }
      };
      for (int w = 0; w < nv; ++w) {
        if (plan_[w].empty()) continue;
        if (w == v) {
          for (int s = 0; s < static_cast<int>(plan_[v].size()); ++s)
            if (s != d) consider(w, s);
        } else {
          for (int s = 0; s <= static_cast<int>(plan_[w].size()); ++s) consider(w, s);
        }
      }
      for (int w : idle_reps) consider(w, 0);
    }
  if (!found) return false;
  build(bv, bd, bw, bs);
  const Score sa = eval(bv, trial_a_);
  if (bw != bv) {
    const Score sb = eval(bw, trial_b_);
    commit(bw, trial_b_, sb);
  }
  commit(bv, trial_a_, sa);
  refresh();
  return true;
}

bool Improver::change_direction() {
  bool any = false;
  for (int v = 0; v < static_cast<int>(plan_.size()); ++v)
    for (int d = 0; d < static_cast<int>(plan_[v].size()); ++d) {
      if (plan_[v][d].size() < 2) continue;
      trial_a_ = plan_[v];
      std::reverse(trial_a_[d].begin(), trial_a_[d].end());
      const Score s = eval(v, trial_a_);
      if ((total_ - vs_[v] + s).better_than(total_)) {
        commit(v, trial_a_, s);
        refresh();
        any = true;
      }
    }
  return any;
}

bool Improver::three_opt_intra() {
  std::vector<int> seq;
  for (int v = 0; v < static_cast<int>(plan_.size()); ++v)
    for (int d = 0; d < static_cast<int>(plan_[v].size()); ++d) {
      const auto& s = plan_[v][d];
      const int L = static_cast<int>(s.size());
      for (int i = 0; i < L; ++i)
        for (int j = i + 1; j < L; ++j)
          for (int k = j + 1; k <= L; ++k)
            for (int type = 0; type < 7; ++type) {
              // A = s[0,i) B = s[i,j) C = s[j,k) D = s[k,L)
              const bool swap_bc = type >= 3;
              const bool rev_b = type == 0 || type == 2 || type == 5 || type == 6;
              const bool rev_c = type == 1 || type == 2 || type == 4 || type == 6;
              seq.assign(s.begin(), s.begin() + i);
              auto put = [&](int lo, int hi, bool rev) {
                if (rev)
                  seq.insert(seq.end(), std::make_reverse_iterator(s.begin() + hi),
                             std::make_reverse_iterator(s.begin() + lo));
                else
                  seq.insert(seq.end(), s.begin() + lo, s.begin() + hi);
              };
              if (swap_bc) {
                put(j, k, rev_c);
                put(i, j, rev_b);
              } else {
                put(i, j, rev_b);
                put(j, k, rev_c);
              }
              seq.insert(seq.end(), s.begin() + k, s.end());
              if (seq == s) continue;
              trial_a_ = plan_[v];
              trial_a_[d] = seq;
              const Score sc = eval(v, trial_a_);
              if ((total_ - vs_[v] + sc).better_than(total_)) {
                commit(v, trial_a_, sc);
                refresh();
                return true;
              }
            }
    }
  return false;
}

bool Improver::two_opt_star() {
  struct Ref {
    int v, d;
  };
  std::vector<Ref> drives;
  for (int v = 0; v < static_cast<int>(plan_.size()); ++v)
    for (int d = 0; d < static_cast<int>(plan_[v].size()); ++d) drives.push_back({v, d});
  std::vector<int> x2, y2;
  for (std::size_t a = 0; a < drives.size(); ++a)
    for (std::size_t b = a + 1; b < drives.size(); ++b) {
      const auto [v, d] = drives[a];
      const auto [w, e] = drives[b];
      const auto& X = plan_[v][d];
      const auto& Y = plan_[w][e];
      const int lx = static_cast<int>(X.size()), ly = static_cast<int>(Y.size());
      for (int i = 0; i <= lx; ++i)
        for (int j = 0; j <= ly; ++j)
          for (int rev = 0; rev < 2; ++rev) {
            if (rev == 0) {
              // X[0,i) + Y[j,ly) and Y[0,j) + X[i,lx)
              if ((i == lx && j == ly) || (i == 0 && j == 0)) continue;
              x2.assign(X.begin(), X.begin() + i);
              x2.insert(x2.end(), Y.begin() + j, Y.end());
              y2.assign(Y.begin(), Y.begin() + j);
              y2.insert(y2.end(), X.begin() + i, X.end());
            } else {
              // X[0,i) + rev(Y[0,j)) and rev(X[i,lx)) + Y[j,ly)
              if ((i == lx && j == 0) || (i == 0 && j == ly)) continue;
              x2.assign(X.begin(), X.begin() + i);
              x2.insert(x2.end(), std::make_reverse_iterator(Y.begin() + j), Y.rend());
              y2.assign(X.rbegin(), std::make_reverse_iterator(X.begin() + i));
              y2.insert(y2.end(), Y.begin() + j, Y.end());
            }
            if (feasible()) {
              double mx = 0, vx = 0, my = 0, vy = 0;
              for (int t : x2) mx += ev_->token_mass(t), vx += ev_->token_volume(t);
              for (int t : y2) my += ev_->token_mass(t), vy += ev_->token_volume(t);
              if (!ev_->fits(v, mx, vx) || !ev_->fits(w, my, vy)) continue;
            }
            Score sc;
            if (v == w) {
              trial_a_ = plan_[v];
              trial_a_[d] = x2;
              trial_a_[e] = y2;
              sc = total_ - vs_[v] + eval(v, trial_a_);
            } else {
              trial_a_ = plan_[v];
              trial_a_[d] = x2;
              trial_b_ = plan_[w];
              trial_b_[e] = y2;
              sc = total_ - vs_[v] - vs_[w] + eval(v, trial_a_) + eval(w, trial_b_);
            }
            if (!sc.better_than(total_)) continue;
            const Score sa = eval(v, trial_a_);
            if (v != w) {
              const Score sb = eval(w, trial_b_);
              commit(w, trial_b_, sb);
            }
            commit(v, trial_a_, sa);
            refresh();
            return true;
          }
    }
  return false;
}

bool Improver::relocate_segment() {
  struct Ref {
    int v, d;
  };
  std::vector<Ref> drives;
  for (int v = 0; v < static_cast<int>(plan_.size()); ++v)
    for (int d = 0; d < static_cast<int>(plan_[v].size()); ++d) drives.push_back({v, d});
  for (const auto& [v, d] : drives) {
    const auto& X = plan_[v][d];
    const int lx = static_cast<int>(X.size());
    for (int i = 0; i < lx; ++i) {
      double seg_m = 0.0, seg_vol = 0.0;
      for (int j = i + 1; j <= lx; ++j) {
        seg_m += ev_->token_mass(X[j - 1]);
        seg_vol += ev_->token_volume(X[j - 1]);
        for (const auto& [w, e] : drives) {
          if (w == v && e == d) continue;
          if (feasible() && !ev_->fits(w, dm_[w][e] + seg_m, dvol_[w][e] + seg_vol)) continue;
          const auto& Y = plan_[w][e];
          for (int k = 0; k <= static_cast<int>(Y.size()); ++k)
            for (int rev = 0; rev < 2; ++rev) {
              if (rev && j - i == 1) continue;
              trial_a_ = plan_[v];
              auto& tx = trial_a_[d];
              std::vector<int> seg(X.begin() + i, X.begin() + j);
              if (rev) std::reverse(seg.begin(), seg.end());
              tx.erase(tx.begin() + i, tx.begin() + j);
              Score sc;
              if (w == v) {
                auto& ty = trial_a_[e];
                ty.insert(ty.begin() + k, seg.begin(), seg.end());
                sc = total_ - vs_[v] + eval(v, trial_a_);
              } else {
                trial_b_ = plan_[w];
                trial_b_[e].insert(trial_b_[e].begin() + k, seg.begin(), seg.end());
                sc = total_ - vs_[v] - vs_[w] + eval(v, trial_a_) + eval(w, trial_b_);
              }
              if (!sc.better_than(total_)) continue;
              const Score sa = eval(v, trial_a_);
              if (w != v) {
                const Score sb = eval(w, trial_b_);
                commit(w, trial_b_, sb);
              }
              commit(v, trial_a_, sa);
              refresh();
              return true;
            }
        }
      }
    }
  }
  return false;
}

LsStats descend(Improver& imp, const LsConfig& cfg, const Deadline& deadline) {
  LsStats st;
  st.initial = imp.score();
  imp.set_first_improvement(cfg.phase2_first_improvement);
  const bool triples = imp.plan().size() > 0 && [&] {
    int tokens = 0;
    for (const auto& drives : imp.plan())
      for (const auto& d : drives) tokens += static_cast<int>(d.size());
    return tokens <= cfg.triple_swap_limit;
  }();

  using Step = bool (*)(Improver&);
  std::vector<Step> steps = {
      [](Improver& m) { return m.swap_vertices(2, 1, 0, nullptr); },
      [](Improver& m) { return m.move_vertices(1, 0, nullptr); },
      [](Improver& m) { return m.move_vertices(2, 0, nullptr); },
      [](Improver& m) { return m.move_vertices(3, 0, nullptr); },
      [](Improver& m) { return m.swap_vertices(2, 2, 0, nullptr); },
      [](Improver& m) { return m.swap_vertices(2, 3, 0, nullptr); },
      [](Improver& m) { return m.swap_drives(); },
      [](Improver& m) { return m.move_drive(); },
      [](Improver& m) { return m.change_direction(); },
  };
  if (triples) steps.push_back([](Improver& m) { return m.swap_vertices(3, 1, 0, nullptr); });
  if (cfg.phase2_segment_moves) {
    steps.push_back([](Improver& m) { return m.three_opt_intra(); });
    steps.push_back([](Improver& m) { return m.two_opt_star(); });
    steps.push_back([](Improver& m) { return m.relocate_segment(); });
  }

  bool improved = true;
  while (improved) {
    improved = false;
    ++st.phase2_cycles;
    for (auto step : steps) {
      while (true) {
        if (deadline.expired()) {
          st.truncated = true;
          imp.set_first_improvement(false);
          st.final = imp.score();
          return st;
        }
        if (!step(imp)) break;
        ++st.phase2_moves;
        improved = true;
      }
    }
  }
  imp.set_first_improvement(false);
  st.final = imp.score();
  return st;
}

LsResult run_local_search(const Evaluator& ev, Plan initial, const LsConfig& cfg,
                          const Deadline& deadline) {
  Improver imp(ev, std::move(initial));
  LsStats st;
  st.initial = imp.score();
  Rng rng(cfg.rng_seed);
  const auto w = cfg.weights.as_array();
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  const int g_c = cfg.combos_per_iteration;

  for (int it = 0; it < cfg.max_iterations; ++it) {
    if (deadline.expired()) {
      st.truncated = true;
      break;
    }
    double r = rng.unit() * sum;
    std::size_t s = 0;
    while (s + 1 < w.size() && r >= w[s]) r -= w[s++];
    bool moved = false;
    switch (s) {
      case 0: moved = imp.swap_vertices(2, 1, g_c, &rng); break;
      case 1: moved = imp.move_vertices(1, g_c, &rng); break;
      case 2: moved = imp.swap_vertices(3, 1, g_c, &rng); break;
      case 3: moved = imp.swap_vertices(2, 3, g_c, &rng); break;
      case 4: moved = imp.swap_vertices(2, 2, g_c, &rng); break;
      case 5: moved = imp.swap_drives(); break;
      case 6: moved = imp.move_drive(); break;
      default: moved = imp.change_direction(); break;
    }
    st.phase1_moves += moved;
  }
  if (!st.truncated) {
    const auto p2 = descend(imp, cfg, deadline);
    st.phase2_moves = p2.phase2_moves;
    st.phase2_cycles = p2.phase2_cycles;
    st.truncated = p2.truncated;
  }
  st.final = imp.score();
  return {imp.plan(), st};
}

namespace {

template <class F>
Solution on_plan(const Instance& in, const Solution& sol, F&& f) {
  const Evaluator ev(in);
  Improver imp(ev, drives_by_vehicle(in, sol));
  f(imp);
  return solution_from_plan(imp.plan());
}

}  // namespace

Solution swap_vertices(const Instance& in, const Solution& sol, int g_c, int g_n, int g_s, Rng& rng) {
  return on_plan(in, sol, [&](Improver& m) { m.swap_vertices(g_n, g_s, g_c, &rng); });
}

Solution move_vertices(const Instance& in, const Solution& sol, int g_c, int g_s, Rng& rng) {
  return on_plan(in, sol, [&](Improver& m) { m.move_vertices(g_s, g_c, &rng); });
}

Solution swap_drives(const Instance& in, const Solution& sol) {
  return on_plan(in, sol, [](Improver& m) { m.swap_drives(); });
}

Solution move_drive(const Instance& in, const Solution& sol) {
  return on_plan(in, sol, [](Improver& m) { m.move_drive(); });
}

Solution change_direction(const Instance& in, const Solution& sol) {
  return on_plan(in, sol, [](Improver& m) { m.change_direction(); });
}

Solution run(const Instance& in, const Solution& initial, const LsConfig& cfg, LsStats* stats) {
  const Evaluator ev(in);
  auto res = run_local_search(ev, drives_by_vehicle(in, initial), cfg);
  if (stats) *stats = res.stats;
  return solution_from_plan(res.plan);
}

}  // namespace amvrp
