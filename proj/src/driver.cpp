#include "bf/driver.hpp"

#include <chrono>
#include <iomanip>
#include <set>
#include <sstream>

#include "bf/aut.hpp"
#include "bf/bisim.hpp"
#include "bf/conesfoci.hpp"
#include "bf/models.hpp"

namespace bf {

namespace {

std::set<std::string> parse_hide_profile(const std::string& profile) {
  if (profile == "standard") return standard_hide_set();
  if (profile == "none") return {};
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos <= profile.size()) {
    std::size_t comma = profile.find(',', pos);
    if (comma == std::string::npos) comma = profile.size();
    std::string name = profile.substr(pos, comma - pos);
    if (!name.empty()) out.insert(std::move(name));
    pos = comma + 1;
  }
  return out;
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

std::string fmt_seconds(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << s << "s";
  return os.str();
}

}  // namespace

int run(const RunConfig& config, std::ostream& out) {
  static const std::set<std::string> kChecks = {"invariants", "bisim", "branching",
                                                "conesfoci", "all"};
  if (config.threads < 1) {
    out << "error: --threads must be at least 1\n";
    return 2;
  }
  if (config.state_limit < 1) {
    out << "error: --limit must be at least 1\n";
    return 2;
  }
  if (!kChecks.count(config.check)) {
    out << "error: unknown check '" << config.check
        << "' (expected invariants, bisim, branching, conesfoci, or all)\n";
    return 2;
  }

  const int n = config.threads;
  const std::size_t limit = config.state_limit;
  bool all_pass = true;

  try {
    bool spec_mutated = false, impl_mutated = false;
    if (config.mutation) spec_mutated = mutation_targets_spec(*config.mutation);
    impl_mutated = config.mutation && !spec_mutated;

    Lpe<ImplState> impl =
        impl_mutated ? mutate_impl(n, *config.mutation) : impl_lpe(n);
    Lpe<SpecState> spec =
        spec_mutated ? mutate_spec(n, *config.mutation) : spec_lpe(n);
    if (config.mutation)
      out << "mutation: " << *config.mutation << " (applied to the "
          << (spec_mutated ? "specification" : "implementation") << ")\n";

    const std::set<std::string> hide_set = parse_hide_profile(config.hide_profile);
    const bool run_all = config.check == "all";

    std::optional<Lts<ImplState>> impl_lts;
    std::optional<Lts<SpecState>> spec_lts;
    auto need_impl_lts = [&]() -> const Lts<ImplState>& {
      if (!impl_lts) impl_lts = explore(impl, limit);
      return *impl_lts;
    };
    auto need_spec_lts = [&]() -> const Lts<SpecState>& {
      if (!spec_lts) spec_lts = explore(spec, limit);
      return *spec_lts;
    };

    if (run_all || config.check == "invariants") {
      Timer t;
      bool pass = true;
      std::string detail;
      for (auto kind : {InvariantKind::Mutex, InvariantKind::Busy, InvariantKind::Forbidden}) {
        auto verdict = check_invariant(impl, invariant_pred(kind), limit);
        if (!verdict.holds) {
          pass = false;
          const auto& cx = *verdict.counterexample;
          detail = "invariant ";
          detail += kind == InvariantKind::Mutex  ? "1"
                    : kind == InvariantKind::Busy ? "2"
                                                  : "3";
          detail += " violated at " + cx.state.str();
          if (cx.label) detail += " via " + cx.label->str() + " -> " + cx.successor->str();
          break;
        }
      }
      std::size_t states = 0;
      if (pass) {
        const auto& lts = need_impl_lts();
        states = lts.states.size();
        for (const ImplState& d : lts.states) {
          Flags derived = derive_flags(d.sub);
          if (!(derived == Flags{d.busy, d.forbidden, d.mtx})) {
            pass = false;
            detail = "stored flags differ from derived flags at " + d.str();
            break;
          }
        }
      }
      out << "check invariants: " << (pass ? "pass" : "FAIL") << " (states=" << states
          << ", elapsed=" << fmt_seconds(t.seconds()) << ")";
      if (!pass) out << " " << detail;
      out << "\n";
      all_pass = all_pass && pass;
    }

    if (run_all || config.check == "branching") {
      Timer t;
      auto a = hide(need_impl_lts(), hide_set);
      auto b = hide(need_spec_lts(), hide_set);
      auto verdict = branching_bisim(a, b);
      bool pass = verdict.equivalent;
      out << "check branching: " << (pass ? "pass" : "FAIL") << " ("
          << (pass ? "equivalent" : "not equivalent") << ", impl=" << a.states.size()
          << " states, spec=" << b.states.size()
          << " states, elapsed=" << fmt_seconds(t.seconds()) << ")\n";
      if (!pass) {
        auto [i, j] = verdict.distinguishing_pair();
        out << "  distinguished: " << a.states[i].str() << "  vs  " << b.states[j].str()
            << "\n";
      }
      all_pass = all_pass && pass;
    }

    if (run_all || config.check == "bisim") {
      Timer t;
      auto a = hide(need_impl_lts(), hide_set);
      auto b = hide(need_spec_lts(), hide_set);
      auto verdict = dpbb(a, b);
      bool pass = verdict.equivalent;
      out << "check dpbb: " << (pass ? "pass" : "FAIL") << " ("
          << (pass ? "equivalent" : "not equivalent") << ", impl=" << a.states.size()
          << " states, spec=" << b.states.size()
          << " states, elapsed=" << fmt_seconds(t.seconds()) << ")\n";
      if (!pass) {
        auto [i, j] = verdict.distinguishing_pair();
        out << "  distinguished: " << a.states[i].str() << "  vs  " << b.states[j].str()
            << "\n";
      }
      all_pass = all_pass && pass;
    }

    if (run_all || config.check == "conesfoci") {
      Timer t;
      auto report = check_requirements(impl, spec, all_invariants_pred(), limit);
      bool pass = report.all_pass();
      out << "check conesfoci: " << (pass ? "pass" : "FAIL")
          << " (states=" << report.states_checked << ", elapsed=" << fmt_seconds(t.seconds())
          << ")\n";
      if (report.precondition_failure)
        out << "  precondition: " << *report.precondition_failure << "\n";
      for (int i = 0; i < kRequirementCount; ++i) {
        auto r = static_cast<Requirement>(i);
        const auto& res = report[r];
        out << "  requirement " << requirement_name(r) << ": " << (res.pass ? "pass" : "FAIL");
        if (!res.pass) out << " at " << res.state << " (" << res.detail << ")";
        out << "\n";
      }
      all_pass = all_pass && pass;
    }

    if (config.export_aut_path) {
      auto exported = hide(need_impl_lts(), hide_set);
      export_aut_file(exported, *config.export_aut_path);
      out << "exported implementation LTS to " << *config.export_aut_path << " ("
          << exported.states.size() << " states, " << exported.transitions.size()
          << " transitions)\n";
    }
  } catch (const StateLimitError& e) {
    out << "error: " << e.what() << " (raise --limit)\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    out << "error: " << e.what() << "\n";
    return 2;
  }

  out << "overall: " << (all_pass ? "pass" : "FAIL") << "\n";
  return all_pass ? 0 : 1;
}

}  // namespace bf
