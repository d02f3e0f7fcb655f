//! Agent algorithms as deterministic state machines.

pub mod balanced_global;
pub mod baselines;
pub mod rooted;
pub mod sv;
pub mod weak_disp;

pub use balanced_global::{BalancedGlobal, BalancedGlobalState};
pub use baselines::{GreedyHoleSeeker, RandomWalker, WalkerState};
pub use rooted::{pnq_deadline, termination_round, Pnq, PnqState, RootedNPlusOne, RootedState};
pub use sv::{build_sv, OccupiedMap, SvTuple};
pub use weak_disp::{WeakDisp, WeakDispState};

#[cfg(test)]
mod tests;
