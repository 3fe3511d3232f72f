//! Composable, representable, executable state machines.
//!
//! * [`topology`] describes which state transitions a machine may take.
//! * [`machine`] holds single Mealy machines checked against a topology at every step.
//! * [`compose`] wires machines into trees (sequential, parallel, alternative,
//!   feedback and Kleisli composition) and interprets them.
//! * [`render`] draws DOT or Mermaid diagrams from the same trees.
//! * [`domain`] is a worked example: a cart paid through a gateway, with shipping.

pub mod compose;
pub mod domain;
pub mod error;
pub mod machine;
pub mod render;
pub mod topology;

pub use compose::{fanin, identity_machine, split_choice, RunConfig, StateMachine, Structure};
pub use either::Either;
pub use error::{BuildError, StepError, TraceError};
pub use machine::{stateless, unrestricted_mealy, BaseMachine, MachineState, StateVertex, StepResult};
pub use render::{render_base, render_flow, Diagram, Format};
pub use topology::{Topology, VertexId};
