//! Minimal lifecycle state machine for the coding function: instantiation,
//! execution/monitoring, and termination. Pure transition function; side
//! effects are returned as actions for the caller to run.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::Error;

/// Re-optimization trigger: largest accepted per-link erasure drift.
pub const DELTA_REOPT: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LifecycleState {
    Inactive,
    Instantiating,
    Active,
    Terminating,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LifecycleEvent {
    /// A user requests the reliability functionality.
    RequestActivate,
    /// Resource allocation and configuration completed.
    InstantiationAck,
    /// Periodic monitoring pass.
    MonitorTick,
    /// Fresh link statistics arrived; carries the largest per-link |delta eps|.
    StatsUpdate { max_delta: f64 },
    /// A user asks to deactivate the functionality.
    RequestTerminate,
    /// Resources have been released.
    TerminationAck,
}

/// What the orchestrator must do after a transition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LifecycleAction {
    /// Query link statistics and run the rate optimization.
    RunOptimization,
    /// Persist a monitoring snapshot.
    RecordSnapshot,
    /// Statistics drifted beyond the threshold: optimize again.
    Reoptimize,
    /// Tear down allocated resources.
    ReleaseResources,
}

/// Advances the machine by one event. Undeclared (state, event) pairs return
/// InvalidTransition and the caller's state stays as it was.
pub fn lifecycle_step(
    state: LifecycleState,
    event: LifecycleEvent,
) -> Result<(LifecycleState, Vec<LifecycleAction>), Error> {
    use LifecycleAction::*;
    use LifecycleEvent::*;
    use LifecycleState::*;
    match (state, event) {
        (Inactive, RequestActivate) => Ok((Instantiating, vec![RunOptimization])),
        (Instantiating, InstantiationAck) => Ok((Active, vec![])),
        (Active, MonitorTick) => Ok((Active, vec![RecordSnapshot])),
        (Active, StatsUpdate { max_delta }) => {
            let actions = if max_delta > DELTA_REOPT { vec![Reoptimize] } else { vec![] };
            Ok((Active, actions))
        }
        (Active, RequestTerminate) => Ok((Terminating, vec![ReleaseResources])),
        (Terminating, TerminationAck) => Ok((Inactive, vec![])),
        _ => Err(Error::InvalidTransition),
    }
}
