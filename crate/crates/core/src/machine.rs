//! Single Mealy machines whose transitions are checked against a [`Topology`].

use std::fmt;
use std::sync::Arc;

use crate::error::{BuildError, StepError};
use crate::topology::{Topology, VertexId};

/// Vertex label used by [`stateless`] machines.
pub const STATELESS_VERTEX: &str = "Unit";
/// Vertex label used by [`unrestricted_mealy`] machines.
pub const UNRESTRICTED_VERTEX: &str = "State";

/// Current state of a base machine: the vertex it sits on plus the data carried there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineState<S> {
    pub vertex: VertexId,
    pub payload: S,
}

impl<S> MachineState<S> {
    pub fn new(vertex: VertexId, payload: S) -> Self {
        MachineState { vertex, payload }
    }
}

/// Payload types that determine their own vertex, like an enum with one variant per vertex.
pub trait StateVertex {
    fn vertex(&self) -> VertexId;
}

impl<S: StateVertex> MachineState<S> {
    pub fn of(payload: S) -> Self {
        MachineState {
            vertex: payload.vertex(),
            payload,
        }
    }
}

/// What an action returns: an output and the state to move to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepResult<S, O> {
    pub output: O,
    pub next: MachineState<S>,
}

impl<S, O> StepResult<S, O> {
    pub fn new(output: O, next: MachineState<S>) -> Self {
        StepResult { output, next }
    }
}

impl<S: StateVertex, O> StepResult<S, O> {
    /// Shorthand for payloads that know their vertex.
    pub fn to(output: O, next: S) -> Self {
        StepResult::new(output, MachineState::of(next))
    }
}

/// Pure transition function of a base machine.
pub type Action<S, I, O> = dyn Fn(&MachineState<S>, I) -> StepResult<S, O> + Send + Sync;

/// A named Mealy machine over an explicit topology.
///
/// Stepping never mutates: [`BaseMachine::step`] hands back a new machine value
/// and leaves the receiver untouched.
pub struct BaseMachine<S, I, O> {
    name: Arc<str>,
    topology: Arc<Topology>,
    initial: VertexId,
    state: MachineState<S>,
    action: Arc<Action<S, I, O>>,
}

impl<S: Clone, I, O> Clone for BaseMachine<S, I, O> {
    fn clone(&self) -> Self {
        BaseMachine {
            name: self.name.clone(),
            topology: self.topology.clone(),
            initial: self.initial.clone(),
            state: self.state.clone(),
            action: self.action.clone(),
        }
    }
}

impl<S: fmt::Debug, I, O> fmt::Debug for BaseMachine<S, I, O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BaseMachine")
            .field("name", &self.name)
            .field("topology", &self.topology)
            .field("state", &self.state)
            .finish_non_exhaustive()
    }
}

impl<S, I, O> BaseMachine<S, I, O> {
    /// Builds a machine sitting at `initial`. The topology is normalized; the
    /// action is not evaluated.
    pub fn new<F>(
        name: impl Into<String>,
        topology: Topology,
        initial: MachineState<S>,
        action: F,
    ) -> Result<Self, BuildError>
    where
        F: Fn(&MachineState<S>, I) -> StepResult<S, O> + Send + Sync + 'static,
    {
        let name = name.into();
        if name.is_empty() {
            return Err(BuildError::EmptyName);
        }
        let topology = topology.normalize();
        if !topology.contains_vertex(&initial.vertex) {
            return Err(BuildError::UnknownVertex {
                machine: name,
                vertex: initial.vertex,
            });
        }
        Ok(BaseMachine {
            name: name.into(),
            topology: Arc::new(topology),
            initial: initial.vertex.clone(),
            state: initial,
            action: Arc::new(action),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn topology(&self) -> &Topology {
        &self.topology
    }

    pub(crate) fn shared_topology(&self) -> Arc<Topology> {
        self.topology.clone()
    }

    /// Vertex the machine was constructed at.
    pub fn initial_vertex(&self) -> &VertexId {
        &self.initial
    }

    pub fn state(&self) -> &MachineState<S> {
        &self.state
    }

    /// Runs the action on the current state. Fails if the resulting transition
    /// is not allowed by the topology.
    pub fn step(&self, input: I) -> Result<(O, Self), StepError> {
        let StepResult { output, next } = (self.action)(&self.state, input);
        if !self.topology.allows_transition(&self.state.vertex, &next.vertex) {
            return Err(StepError::DisallowedTransition {
                machine: self.name.to_string(),
                from: self.state.vertex.clone(),
                to: next.vertex,
            });
        }
        Ok((
            output,
            BaseMachine {
                name: self.name.clone(),
                topology: self.topology.clone(),
                initial: self.initial.clone(),
                state: next,
                action: self.action.clone(),
            },
        ))
    }
}

fn single_vertex(label: &str) -> VertexId {
    VertexId::new(label).expect("constant label is non-empty")
}

/// A machine with a single vertex that maps each input through `f`.
///
/// # Panics
///
/// If `name` is empty.
pub fn stateless<I, O, F>(name: impl Into<String>, f: F) -> BaseMachine<(), I, O>
where
    F: Fn(I) -> O + Send + Sync + 'static,
{
    let vertex = single_vertex(STATELESS_VERTEX);
    BaseMachine::new(
        name,
        Topology::trivial(vertex.clone()),
        MachineState::new(vertex, ()),
        move |state: &MachineState<()>, input| StepResult::new(f(input), state.clone()),
    )
    .expect("stateless machine names must be non-empty")
}

/// A classic Mealy machine with an arbitrary state `s`, kept as the payload of
/// a single vertex. Every step is an identity transition.
///
/// # Panics
///
/// If `name` is empty.
pub fn unrestricted_mealy<S, I, O, F>(name: impl Into<String>, s0: S, f: F) -> BaseMachine<S, I, O>
where
    F: Fn(&S, I) -> (O, S) + Send + Sync + 'static,
{
    let vertex = single_vertex(UNRESTRICTED_VERTEX);
    BaseMachine::new(
        name,
        Topology::trivial(vertex.clone()),
        MachineState::new(vertex, s0),
        move |state: &MachineState<S>, input| {
            let (output, s) = f(&state.payload, input);
            StepResult::new(output, MachineState::new(state.vertex.clone(), s))
        },
    )
    .expect("unrestricted machine names must be non-empty")
}
