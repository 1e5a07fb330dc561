#pragma once

#include <optional>
#include <string>

#include "gnnv/formula.hpp"
#include "gnnv/gnn.hpp"
#include "gnnv/sat.hpp"

namespace gnnv {

/// K# formula holding exactly at the pointed Boolean graphs the model accepts.
Formula gnn_to_ksharp(const GnnModel& n);

/// Model accepting exactly where f holds on 0/1 features named by names:
/// one coordinate per subformula, recomputed by every layer, with as many
/// layers as the subformula DAG is high. Throws InputError on #g.
GnnModel ksharp_to_gnn(Formula f, const std::vector<std::string>& names);

enum class Task { NonEmpty, Equiv, NSubPhi, PhiSubN, Consistent };
/// CLI spellings: nonempty, equiv, n-sub-phi, phi-sub-n, consistent.
Task parse_task(const std::string& name);
const char* task_name(Task t);

enum class Outcome { Holds, Fails, Unknown };
const char* outcome_name(Outcome o);

struct Report {
  Task task = Task::NonEmpty;
  Outcome verdict = Outcome::Unknown;
  /// Counterexample for Fails on inclusion tasks, example for Holds on
  /// NonEmpty and Consistent.
  std::optional<sat::SatResult> witness;
  /// The formula whose satisfiability decided the answer.
  std::optional<Formula> decided_by;
  sat::SatStats stats;
  double seconds = 0;
  std::string reason;
};

/// Reduces the task to K# satisfiability. Inclusions ask for a model of
/// one side and the negation of the other. Witness graphs are cross-checked
/// against the model by running it forward. Throws InputError when a spec
/// formula is missing for a task that needs one.
Report verify(const GnnModel& n, std::optional<Formula> spec, Task task, const sat::SatOptions& opts = {});

std::string report_to_json(const Report& r, const GnnModel& n);

}  // namespace gnnv
