//! Composition tree over base machines and its interpreter.
//!
//! A [`StateMachine`] is a tree whose leaves are [`BaseMachine`]s and whose
//! inner nodes say how subtrees are wired together:
//!
//! | node          | input          | output          |
//! |---------------|----------------|-----------------|
//! | `Sequential`  | `a`            | `c`             |
//! | `Parallel`    | `(a, c)`       | `(b, d)`        |
//! | `Alternative` | `Either<a, c>` | `Either<b, d>`  |
//! | `Feedback`    | `a`            | `Vec<b>`        |
//! | `Kleisli`     | `a`            | `Vec<c>`        |
//!
//! Every step consumes nothing: it returns the output together with a new tree.
//! The same tree can be inspected through [`StateMachine::structure`], which is
//! what the renderer draws.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use either::Either;

use crate::error::{BuildError, StepError, TraceError};
use crate::machine::{stateless, BaseMachine};
use crate::topology::{Topology, VertexId};

/// Knobs for running a tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    feedback_cap: usize,
}

impl RunConfig {
    pub const DEFAULT_FEEDBACK_CAP: usize = 1000;

    /// `feedback_cap` bounds the number of inner steps a single `Feedback`
    /// node may take for one input.
    pub fn new(feedback_cap: usize) -> Result<Self, BuildError> {
        if feedback_cap == 0 {
            return Err(BuildError::InvalidFeedbackCap);
        }
        Ok(RunConfig { feedback_cap })
    }

    pub fn feedback_cap(&self) -> usize {
        self.feedback_cap
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            feedback_cap: Self::DEFAULT_FEEDBACK_CAP,
        }
    }
}

/// What a leaf looks like from the outside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeafInfo {
    pub name: String,
    pub topology: Arc<Topology>,
    pub initial: VertexId,
    pub current: VertexId,
}

/// Type-erased shape of a composition tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Structure {
    Basic(LeafInfo),
    Sequential(Box<Structure>, Box<Structure>),
    Parallel(Box<Structure>, Box<Structure>),
    Alternative(Box<Structure>, Box<Structure>),
    Feedback(Box<Structure>, Box<Structure>),
    Kleisli(Box<Structure>, Box<Structure>),
}

impl Structure {
    /// Leaves in depth-first, left-to-right order.
    pub fn leaves(&self) -> Vec<&LeafInfo> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a LeafInfo>) {
        match self {
            Structure::Basic(leaf) => out.push(leaf),
            Structure::Sequential(a, b)
            | Structure::Parallel(a, b)
            | Structure::Alternative(a, b)
            | Structure::Feedback(a, b)
            | Structure::Kleisli(a, b) => {
                a.collect_leaves(out);
                b.collect_leaves(out);
            }
        }
    }

    pub fn as_leaf(&self) -> Option<&LeafInfo> {
        match self {
            Structure::Basic(leaf) => Some(leaf),
            _ => None,
        }
    }
}

trait Node<I, O>: Send + Sync {
    fn step(&self, input: I, cfg: &RunConfig) -> Result<(O, StateMachine<I, O>), StepError>;
    fn structure(&self) -> Structure;
}

/// A composition tree with input `I` and output `O`.
pub struct StateMachine<I, O> {
    node: Arc<dyn Node<I, O>>,
}

impl<I, O> Clone for StateMachine<I, O> {
    fn clone(&self) -> Self {
        StateMachine {
            node: self.node.clone(),
        }
    }
}

impl<I, O> fmt::Debug for StateMachine<I, O> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("StateMachine")
            .field(&self.node.structure())
            .finish()
    }
}

impl<I, O> StateMachine<I, O> {
    fn from_node(node: impl Node<I, O> + 'static) -> Self {
        StateMachine {
            node: Arc::new(node),
        }
    }

    pub fn step(&self, input: I, cfg: &RunConfig) -> Result<(O, Self), StepError> {
        self.node.step(input, cfg)
    }

    /// Feeds `inputs` one after the other, collecting one output per input.
    /// Stops at the first failure.
    pub fn run_trace(
        &self,
        inputs: impl IntoIterator<Item = I>,
        cfg: &RunConfig,
    ) -> Result<Vec<O>, TraceError> {
        let mut machine = self.clone();
        let mut outputs = Vec::new();
        for (index, input) in inputs.into_iter().enumerate() {
            let (output, next) = machine
                .step(input, cfg)
                .map_err(|source| TraceError { index, source })?;
            outputs.push(output);
            machine = next;
        }
        Ok(outputs)
    }

    pub fn structure(&self) -> Structure {
        self.node.structure()
    }

    pub fn leaf_names(&self) -> Vec<String> {
        self.structure()
            .leaves()
            .into_iter()
            .map(|leaf| leaf.name.clone())
            .collect()
    }
}

fn ensure_disjoint(first: &Structure, second: &Structure) -> Result<(), BuildError> {
    let names: HashSet<&str> = first.leaves().iter().map(|l| l.name.as_str()).collect();
    match second.leaves().iter().find(|l| names.contains(l.name.as_str())) {
        Some(leaf) => Err(BuildError::DuplicateLeafName {
            name: leaf.name.clone(),
        }),
        None => Ok(()),
    }
}

impl<I: 'static, O: 'static> StateMachine<I, O> {
    pub fn basic<S: Send + Sync + 'static>(machine: BaseMachine<S, I, O>) -> Self {
        StateMachine::from_node(machine)
    }

    /// Runs `self`, then feeds its output to `second`.
    pub fn sequential<C: 'static>(
        self,
        second: StateMachine<O, C>,
    ) -> Result<StateMachine<I, C>, BuildError> {
        ensure_disjoint(&self.structure(), &second.structure())?;
        Ok(StateMachine::from_node(Sequential {
            first: self,
            second,
        }))
    }

    /// Runs `self` on the first component and `second` on the second.
    pub fn parallel<C: 'static, D: 'static>(
        self,
        second: StateMachine<C, D>,
    ) -> Result<StateMachine<(I, C), (O, D)>, BuildError> {
        ensure_disjoint(&self.structure(), &second.structure())?;
        Ok(StateMachine::from_node(Parallel {
            first: self,
            second,
        }))
    }

    /// Routes `Left` inputs to `self` and `Right` inputs to `second`.
    pub fn alternative<C: 'static, D: 'static>(
        self,
        second: StateMachine<C, D>,
    ) -> Result<StateMachine<Either<I, C>, Either<O, D>>, BuildError> {
        ensure_disjoint(&self.structure(), &second.structure())?;
        Ok(StateMachine::from_node(Alternative {
            first: self,
            second,
        }))
    }

    /// Pre-composes a pure function, held by a stateless leaf called `name`.
    pub fn lmap<Z: 'static>(
        self,
        name: impl Into<String>,
        f: impl Fn(Z) -> I + Send + Sync + 'static,
    ) -> Result<StateMachine<Z, O>, BuildError> {
        StateMachine::basic(stateless(name, f)).sequential(self)
    }

    /// Post-composes a pure function, held by a stateless leaf called `name`.
    pub fn rmap<P: 'static>(
        self,
        name: impl Into<String>,
        g: impl Fn(O) -> P + Send + Sync + 'static,
    ) -> Result<StateMachine<I, P>, BuildError> {
        self.sequential(StateMachine::basic(stateless(name, g)))
    }
}

impl<A: 'static, B: 'static> StateMachine<A, Vec<B>> {
    /// Loops `self` with `backward`: every `b` produced by `self` is handed to
    /// `backward`, whose outputs are fed back into `self`. Only outputs of
    /// `self` are returned, in production order.
    pub fn feedback(self, backward: StateMachine<B, Vec<A>>) -> Result<Self, BuildError>
    where
        B: Clone,
    {
        ensure_disjoint(&self.structure(), &backward.structure())?;
        Ok(StateMachine::from_node(Feedback {
            forward: self,
            backward,
        }))
    }

    /// Feeds each output of `self` to `second`, concatenating the results.
    pub fn kleisli<C: 'static>(
        self,
        second: StateMachine<B, Vec<C>>,
    ) -> Result<StateMachine<A, Vec<C>>, BuildError> {
        ensure_disjoint(&self.structure(), &second.structure())?;
        Ok(StateMachine::from_node(Kleisli {
            first: self,
            second,
        }))
    }
}

/// Stateless identity leaf named `identity`.
pub fn identity_machine<A: 'static>() -> StateMachine<A, A> {
    identity_named("identity")
}

pub fn identity_named<A: 'static>(name: impl Into<String>) -> StateMachine<A, A> {
    StateMachine::basic(stateless(name, |a| a))
}

/// Same as [`StateMachine::alternative`].
pub fn split_choice<A, B, C, D>(
    first: StateMachine<A, B>,
    second: StateMachine<C, D>,
) -> Result<StateMachine<Either<A, C>, Either<B, D>>, BuildError>
where
    A: 'static,
    B: 'static,
    C: 'static,
    D: 'static,
{
    first.alternative(second)
}

/// Merges two machines with the same output type into one that accepts either
/// input. The collapsing leaf is called `name`.
pub fn fanin<A, B, C>(
    name: impl Into<String>,
    first: StateMachine<A, C>,
    second: StateMachine<B, C>,
) -> Result<StateMachine<Either<A, B>, C>, BuildError>
where
    A: 'static,
    B: 'static,
    C: 'static,
{
    first.alternative(second)?.rmap(name, Either::into_inner)
}

impl<S, I, O> Node<I, O> for BaseMachine<S, I, O>
where
    S: Send + Sync + 'static,
    I: 'static,
    O: 'static,
{
    fn step(&self, input: I, _cfg: &RunConfig) -> Result<(O, StateMachine<I, O>), StepError> {
        let (output, next) = BaseMachine::step(self, input)?;
        Ok((output, StateMachine::from_node(next)))
    }

    fn structure(&self) -> Structure {
        Structure::Basic(LeafInfo {
            name: self.name().to_owned(),
            topology: self.shared_topology(),
            initial: self.initial_vertex().clone(),
            current: self.state().vertex.clone(),
        })
    }
}

struct Sequential<A, B, C> {
    first: StateMachine<A, B>,
    second: StateMachine<B, C>,
}

impl<A: 'static, B: 'static, C: 'static> Node<A, C> for Sequential<A, B, C> {
    fn step(&self, input: A, cfg: &RunConfig) -> Result<(C, StateMachine<A, C>), StepError> {
        let (b, first) = self.first.step(input, cfg)?;
        let (c, second) = self.second.step(b, cfg)?;
        Ok((c, StateMachine::from_node(Sequential { first, second })))
    }

    fn structure(&self) -> Structure {
        Structure::Sequential(
            Box::new(self.first.structure()),
            Box::new(self.second.structure()),
        )
    }
}

struct Parallel<A, B, C, D> {
    first: StateMachine<A, B>,
    second: StateMachine<C, D>,
}

impl<A: 'static, B: 'static, C: 'static, D: 'static> Node<(A, C), (B, D)> for Parallel<A, B, C, D> {
    fn step(
        &self,
        (a, c): (A, C),
        cfg: &RunConfig,
    ) -> Result<((B, D), StateMachine<(A, C), (B, D)>), StepError> {
        let (b, first) = self.first.step(a, cfg)?;
        let (d, second) = self.second.step(c, cfg)?;
        Ok(((b, d), StateMachine::from_node(Parallel { first, second })))
    }

    fn structure(&self) -> Structure {
        Structure::Parallel(
            Box::new(self.first.structure()),
            Box::new(self.second.structure()),
        )
    }
}

struct Alternative<A, B, C, D> {
    first: StateMachine<A, B>,
    second: StateMachine<C, D>,
}

impl<A: 'static, B: 'static, C: 'static, D: 'static> Node<Either<A, C>, Either<B, D>>
    for Alternative<A, B, C, D>
{
    fn step(
        &self,
        input: Either<A, C>,
        cfg: &RunConfig,
    ) -> Result<(Either<B, D>, StateMachine<Either<A, C>, Either<B, D>>), StepError> {
        let (output, node) = match input {
            Either::Left(a) => {
                let (b, first) = self.first.step(a, cfg)?;
                let node = Alternative {
                    first,
                    second: self.second.clone(),
                };
                (Either::Left(b), node)
            }
            Either::Right(c) => {
                let (d, second) = self.second.step(c, cfg)?;
                let node = Alternative {
                    first: self.first.clone(),
                    second,
                };
                (Either::Right(d), node)
            }
        };
        Ok((output, StateMachine::from_node(node)))
    }

    fn structure(&self) -> Structure {
        Structure::Alternative(
            Box::new(self.first.structure()),
            Box::new(self.second.structure()),
        )
    }
}

struct Feedback<A, B> {
    forward: StateMachine<A, Vec<B>>,
    backward: StateMachine<B, Vec<A>>,
}

/// Counts inner steps of one feedback invocation.
struct Budget {
    cap: usize,
    used: usize,
}

impl Budget {
    fn spend(&mut self) -> Result<(), StepError> {
        if self.used == self.cap {
            return Err(StepError::FeedbackOverflow { cap: self.cap });
        }
        self.used += 1;
        Ok(())
    }
}

impl<A: 'static, B: Clone + 'static> Node<A, Vec<B>> for Feedback<A, B> {
    fn step(&self, input: A, cfg: &RunConfig) -> Result<(Vec<B>, StateMachine<A, Vec<B>>), StepError> {
        let mut budget = Budget {
            cap: cfg.feedback_cap(),
            used: 0,
        };
        let mut produced = Vec::new();
        let mut queue = VecDeque::new();

        budget.spend()?;
        let (bs, mut forward) = self.forward.step(input, cfg)?;
        produced.extend(bs.iter().cloned());
        queue.extend(bs);

        let mut backward = self.backward.clone();
        while let Some(b) = queue.pop_front() {
            budget.spend()?;
            let (inputs, next_backward) = backward.step(b, cfg)?;
            backward = next_backward;
            for a in inputs {
                budget.spend()?;
                let (bs, next_forward) = forward.step(a, cfg)?;
                forward = next_forward;
                produced.extend(bs.iter().cloned());
                queue.extend(bs);
            }
        }
        Ok((produced, StateMachine::from_node(Feedback { forward, backward })))
    }

    fn structure(&self) -> Structure {
        Structure::Feedback(
            Box::new(self.forward.structure()),
            Box::new(self.backward.structure()),
        )
    }
}

struct Kleisli<A, B, C> {
    first: StateMachine<A, Vec<B>>,
    second: StateMachine<B, Vec<C>>,
}

impl<A: 'static, B: 'static, C: 'static> Node<A, Vec<C>> for Kleisli<A, B, C> {
    fn step(&self, input: A, cfg: &RunConfig) -> Result<(Vec<C>, StateMachine<A, Vec<C>>), StepError> {
        let (bs, first) = self.first.step(input, cfg)?;
        let mut second = self.second.clone();
        let mut out = Vec::new();
        for b in bs {
            let (cs, next) = second.step(b, cfg)?;
            second = next;
            out.extend(cs);
        }
        Ok((out, StateMachine::from_node(Kleisli { first, second })))
    }

    fn structure(&self) -> Structure {
        Structure::Kleisli(
            Box::new(self.first.structure()),
            Box::new(self.second.structure()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::machine::unrestricted_mealy;
    use proptest::prelude::*;

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    fn counter(name: &str) -> StateMachine<u32, u32> {
        StateMachine::basic(unrestricted_mealy(name, 0u32, |s: &u32, x: u32| {
            (s + x, s + x)
        }))
    }

    #[test]
    fn run_config_rejects_zero() {
        assert_eq!(RunConfig::new(0), Err(BuildError::InvalidFeedbackCap));
        assert_eq!(RunConfig::default().feedback_cap(), 1000);
    }

    #[test]
    fn sequential_feeds_output_forward() {
        let m = counter("sum")
            .sequential(StateMachine::basic(stateless("double", |x: u32| x * 2)))
            .unwrap();
        assert_eq!(m.run_trace([1, 2, 3], &cfg()).unwrap(), vec![2, 6, 12]);
    }

    #[test]
    fn identity_on_the_left_is_transparent() {
        let m = identity_machine().sequential(counter("sum")).unwrap();
        assert_eq!(
            m.run_trace([5, 1], &cfg()).unwrap(),
            counter("sum").run_trace([5, 1], &cfg()).unwrap()
        );
        let (x, _) = identity_machine::<&str>().step("x", &cfg()).unwrap();
        assert_eq!(x, "x");
    }

    #[test]
    fn parallel_runs_both_sides() {
        let m = counter("left").parallel(counter("right")).unwrap();
        let out = m.run_trace([(1, 10), (2, 20)], &cfg()).unwrap();
        assert_eq!(out, vec![(1, 10), (3, 30)]);
    }

    #[test]
    fn alternative_steps_only_the_addressed_side() {
        let m = counter("left").alternative(counter("right")).unwrap();
        let out = m
            .run_trace(
                [Either::Left(1), Either::Right(10), Either::Left(2), Either::Right(1)],
                &cfg(),
            )
            .unwrap();
        assert_eq!(
            out,
            vec![Either::Left(1), Either::Right(10), Either::Left(3), Either::Right(11)]
        );
    }

    #[test]
    fn split_choice_identity_passes_right_through() {
        let m = split_choice(identity_named::<u8>("l"), identity_named::<u8>("r")).unwrap();
        let (out, _) = m.step(Either::Right(4), &cfg()).unwrap();
        assert_eq!(out, Either::Right(4));
    }

    #[test]
    fn split_choice_left_leaves_right_untouched() {
        let m = split_choice(counter("left"), counter("right")).unwrap();
        let (_, after_left) = m.step(Either::Left(7), &cfg()).unwrap();
        let before = m.step(Either::Right(2), &cfg()).unwrap().0;
        let after = after_left.step(Either::Right(2), &cfg()).unwrap().0;
        assert_eq!(before, after);
    }

    #[test]
    fn fanin_collapses_either() {
        let m = fanin("merge", identity_named::<u8>("l"), identity_named::<u8>("r")).unwrap();
        assert_eq!(m.step(Either::Left(3), &cfg()).unwrap().0, 3);
        assert_eq!(m.step(Either::Right(9), &cfg()).unwrap().0, 9);
    }

    #[test]
    fn rmap_counts_outputs() {
        let m = StateMachine::basic(stateless("emit", |n: usize| vec![(); n]))
            .rmap("len", |v: Vec<()>| v.len())
            .unwrap();
        assert_eq!(m.run_trace([0, 1, 3], &cfg()).unwrap(), vec![0, 1, 3]);
    }

    #[test]
    fn lmap_then_rmap() {
        let m = counter("sum")
            .lmap("parse", |s: &str| s.len() as u32)
            .unwrap()
            .rmap("show", |x: u32| x.to_string())
            .unwrap();
        assert_eq!(m.run_trace(["ab", "c"], &cfg()).unwrap(), vec!["2", "3"]);
    }

    #[test]
    fn kleisli_threads_second_machine_across_outputs() {
        let split = StateMachine::basic(stateless("split", |n: u32| (1..=n).collect::<Vec<_>>()));
        let total = StateMachine::basic(unrestricted_mealy("total", 0u32, |s: &u32, x: u32| {
            (vec![s + x], s + x)
        }));
        let m = split.kleisli(total).unwrap();
        // 1, 1+2, 1+2+3, then 6+1
        assert_eq!(
            m.run_trace([3, 1], &cfg()).unwrap(),
            vec![vec![1, 3, 6], vec![7]]
        );
    }

    #[test]
    fn feedback_with_silent_forward_is_empty() {
        let forward = StateMachine::basic(stateless("silent", |_: u8| Vec::<u8>::new()));
        let backward = StateMachine::basic(stateless("echo", |b: u8| vec![b]));
        let m = forward.feedback(backward).unwrap();
        assert_eq!(m.step(1, &cfg()).unwrap().0, Vec::<u8>::new());
    }

    #[test]
    fn feedback_is_breadth_first() {
        // forward: n -> [n, n+10] while n < 3; backward: b -> [b+1] for b < 10.
        let forward = StateMachine::basic(stateless("fwd", |n: u32| {
            if n < 3 {
                vec![n, n + 10]
            } else {
                vec![]
            }
        }));
        let backward = StateMachine::basic(stateless("bwd", |b: u32| {
            if b < 10 {
                vec![b + 1]
            } else {
                vec![]
            }
        }));
        let m = forward.feedback(backward).unwrap();
        // queue: [0,10] -> pop 0 -> fwd 1 -> [1,11]; produced [0,10,1,11]
        // pop 10 -> nothing; pop 1 -> fwd 2 -> [2,12]; pop 11 -> nothing
        // pop 2 -> fwd 3 -> []; pop 12 -> nothing
        assert_eq!(m.step(0, &cfg()).unwrap().0, vec![0, 10, 1, 11, 2, 12]);
    }

    #[test]
    fn feedback_cap_counts_every_inner_step() {
        let forward = StateMachine::basic(stateless("fwd", |n: u32| {
            if n < 2 {
                vec![n]
            } else {
                vec![]
            }
        }));
        let backward = StateMachine::basic(stateless("bwd", |b: u32| vec![b + 1]));
        let m = forward.feedback(backward).unwrap();
        // fwd(0), bwd(0), fwd(1), bwd(1), fwd(2): five steps
        assert_eq!(m.step(0, &RunConfig::new(5).unwrap()).unwrap().0, vec![0, 1]);
        assert_eq!(
            m.step(0, &RunConfig::new(4).unwrap()).unwrap_err(),
            StepError::FeedbackOverflow { cap: 4 }
        );
    }

    #[test]
    fn duplicate_leaf_names_are_rejected() {
        let err = counter("same").sequential(counter("same")).unwrap_err();
        assert_eq!(
            err,
            BuildError::DuplicateLeafName {
                name: "same".into()
            }
        );
        let nested = counter("a").sequential(counter("b")).unwrap();
        assert!(counter("b").parallel(nested).is_err());
    }

    #[test]
    fn run_trace_reports_failing_index() {
        let forward = StateMachine::basic(stateless("fwd", |n: u32| vec![n]));
        let backward = StateMachine::basic(stateless("bwd", |b: u32| if b > 0 { vec![b] } else { vec![] }));
        let m = forward.feedback(backward).unwrap();
        let err = m.run_trace([0, 0, 1, 0], &RunConfig::new(10).unwrap()).unwrap_err();
        assert_eq!(err.index, 2);
        assert_eq!(err.source, StepError::FeedbackOverflow { cap: 10 });
        assert!(m.run_trace([], &cfg()).unwrap().is_empty());
    }

    #[test]
    fn structure_lists_leaves_depth_first() {
        let m = counter("a")
            .parallel(counter("b"))
            .unwrap()
            .rmap("c", |(x, y)| x + y)
            .unwrap();
        assert_eq!(m.leaf_names(), vec!["a", "b", "c"]);
        assert!(matches!(m.structure(), Structure::Sequential(..)));
    }

    fn tagged_forward() -> StateMachine<u8, Vec<(char, u8)>> {
        StateMachine::basic(stateless("fwd", |x: u8| {
            (0..x % 3).map(|i| ('f', x.wrapping_add(i))).collect()
        }))
    }

    proptest! {
        #[test]
        fn feedback_outputs_come_from_forward(xs in prop::collection::vec(0u8..40, 0..10)) {
            let backward = StateMachine::basic(stateless("bwd", |(_, b): (char, u8)| {
                if b > 5 { vec![b / 2] } else { vec![] }
            }));
            let m = tagged_forward().feedback(backward).unwrap();
            for out in m.run_trace(xs, &cfg()).unwrap() {
                prop_assert!(out.iter().all(|(tag, _)| *tag == 'f'));
            }
        }

        #[test]
        fn parallel_components_are_independent(xs in prop::collection::vec((0u32..50, 0u32..50), 0..20)) {
            let m = counter("l").parallel(counter("r")).unwrap();
            let out = m.run_trace(xs.clone(), &cfg()).unwrap();
            let left = counter("l").run_trace(xs.iter().map(|p| p.0), &cfg()).unwrap();
            let right = counter("r").run_trace(xs.iter().map(|p| p.1), &cfg()).unwrap();
            prop_assert_eq!(out.iter().map(|p| p.0).collect::<Vec<_>>(), left);
            prop_assert_eq!(out.iter().map(|p| p.1).collect::<Vec<_>>(), right);
        }

        #[test]
        fn alternative_isolates_children(xs in prop::collection::vec(prop::bool::ANY.prop_flat_map(|l| (Just(l), 0u32..20)), 0..20)) {
            let inputs: Vec<Either<u32, u32>> = xs
                .iter()
                .map(|&(l, x)| if l { Either::Left(x) } else { Either::Right(x) })
                .collect();
            let m = counter("l").alternative(counter("r")).unwrap();
            let out = m.run_trace(inputs.clone(), &cfg()).unwrap();
            let rights: Vec<u32> = inputs.iter().filter_map(|e| (*e).right()).collect();
            let expected = counter("r").run_trace(rights, &cfg()).unwrap();
            let got: Vec<u32> = out.into_iter().filter_map(Either::right).collect();
            prop_assert_eq!(got, expected);
        }

        #[test]
        fn stepping_is_deterministic(xs in prop::collection::vec(0u8..40, 0..10)) {
            let backward = StateMachine::basic(stateless("bwd", |(_, b): (char, u8)| {
                if b > 5 { vec![b / 2] } else { vec![] }
            }));
            let m = tagged_forward().feedback(backward).unwrap();
            prop_assert_eq!(m.run_trace(xs.clone(), &cfg()), m.run_trace(xs, &cfg()));
        }
    }
}
