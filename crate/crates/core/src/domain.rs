//! Reference domain: a cart aggregate paid through a gateway policy, a payment
//! status projection, and a shipping extension wired in through a second policy.
//!
//! ```text
//! wholeCartDomain = Kleisli (Feedback cart paymentGateway) paymentStatus
//! ```

use either::Either;
use strum::{Display, EnumIter, EnumString};

use crate::compose::{fanin, split_choice, StateMachine};
use crate::machine::{stateless, BaseMachine, MachineState, StateVertex, StepResult};
use crate::topology::{Topology, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString, EnumIter)]
pub enum CartCommand {
    PayCart,
    MarkCartAsPaid,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString, EnumIter)]
pub enum CartEvent {
    CartPaymentInitiated,
    CartPaymentCompleted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString, EnumIter)]
pub enum CartState {
    WaitingForPayment,
    InitiatingPayment,
    PaymentComplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString, EnumIter)]
pub enum CartView {
    PaymentPending,
    PaymentInProgress,
    PaymentDone,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString, EnumIter)]
pub enum ShippingCommand {
    StartShipping,
    MarkAsDelivered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString, EnumIter)]
pub enum ShippingEvent {
    ShippingStarted,
    ShippingDelivered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumString, EnumIter)]
pub enum ShippingInfo {
    NotShipped,
    InTransit,
    Delivered,
}

/// States of the `paymentStatus` projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumIter)]
pub enum PaymentStatusState {
    Pending,
    InProgress,
    Done,
}

/// States of the `shipping` aggregate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumIter)]
pub enum ShippingState {
    NotShipped,
    Shipping,
    Delivered,
}

/// States of the `shippingInfo` projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Display, EnumIter)]
pub enum ShippingInfoState {
    NotShipped,
    InTransit,
    Delivered,
}

fn vertex(label: String) -> VertexId {
    VertexId::new(label).expect("domain vertex labels are non-empty")
}

impl StateVertex for CartState {
    fn vertex(&self) -> VertexId {
        vertex(format!("{self}Vertex"))
    }
}

impl StateVertex for PaymentStatusState {
    fn vertex(&self) -> VertexId {
        vertex(self.to_string())
    }
}

impl StateVertex for ShippingState {
    fn vertex(&self) -> VertexId {
        vertex(format!("{self}V"))
    }
}

impl StateVertex for ShippingInfoState {
    fn vertex(&self) -> VertexId {
        vertex(format!("{self}I"))
    }
}

/// `a -> b -> c` with `c` terminal, over the vertices of `S`.
fn line_topology<S: StateVertex>(a: S, b: S, c: S) -> Topology {
    let (a, b, c) = (a.vertex(), b.vertex(), c.vertex());
    Topology::new(vec![(a, vec![b.clone()]), (b, vec![c.clone()]), (c, vec![])])
}

pub fn cart_topology() -> Topology {
    line_topology(
        CartState::WaitingForPayment,
        CartState::InitiatingPayment,
        CartState::PaymentComplete,
    )
}

/// The six-row cart action table.
pub fn cart_action(state: CartState, command: CartCommand) -> (Vec<CartEvent>, CartState) {
    use CartCommand::*;
    use CartState::*;
    match (state, command) {
        (WaitingForPayment, PayCart) => (vec![CartEvent::CartPaymentInitiated], InitiatingPayment),
        (WaitingForPayment, MarkCartAsPaid) => (vec![], WaitingForPayment),
        (InitiatingPayment, PayCart) => (vec![], InitiatingPayment),
        (InitiatingPayment, MarkCartAsPaid) => (vec![CartEvent::CartPaymentCompleted], PaymentComplete),
        (PaymentComplete, PayCart) => (vec![], PaymentComplete),
        (PaymentComplete, MarkCartAsPaid) => (vec![], PaymentComplete),
    }
}

pub fn cart_machine() -> BaseMachine<CartState, CartCommand, Vec<CartEvent>> {
    BaseMachine::new(
        "cart",
        cart_topology(),
        MachineState::of(CartState::WaitingForPayment),
        |state: &MachineState<CartState>, command| {
            let (events, next) = cart_action(state.payload, command);
            StepResult::to(events, next)
        },
    )
    .expect("cart initial state is in its topology")
}

pub fn cart() -> StateMachine<CartCommand, Vec<CartEvent>> {
    StateMachine::basic(cart_machine())
}

/// Simulated payment provider. With `always_fail` the payment never
/// completes.
pub fn payment_gateway_with(always_fail: bool) -> StateMachine<CartEvent, Vec<CartCommand>> {
    StateMachine::basic(stateless("paymentGateway", move |event| match event {
        CartEvent::CartPaymentInitiated if !always_fail => vec![CartCommand::MarkCartAsPaid],
        _ => vec![],
    }))
}

pub fn payment_gateway() -> StateMachine<CartEvent, Vec<CartCommand>> {
    payment_gateway_with(false)
}

pub fn payment_status_machine() -> BaseMachine<PaymentStatusState, CartEvent, Vec<CartView>> {
    BaseMachine::new(
        "paymentStatus",
        line_topology(
            PaymentStatusState::Pending,
            PaymentStatusState::InProgress,
            PaymentStatusState::Done,
        ),
        MachineState::of(PaymentStatusState::Pending),
        |state: &MachineState<PaymentStatusState>, event| match (state.payload, event) {
            (PaymentStatusState::Pending, CartEvent::CartPaymentInitiated) => {
                StepResult::to(vec![CartView::PaymentInProgress], PaymentStatusState::InProgress)
            }
            (PaymentStatusState::InProgress, CartEvent::CartPaymentCompleted) => {
                StepResult::to(vec![CartView::PaymentDone], PaymentStatusState::Done)
            }
            (s, _) => StepResult::to(vec![], s),
        },
    )
    .expect("initial state is in topology")
}

pub fn payment_status() -> StateMachine<CartEvent, Vec<CartView>> {
    StateMachine::basic(payment_status_machine())
}

pub fn whole_cart_domain() -> StateMachine<CartCommand, Vec<CartView>> {
    write_model()
        .kleisli(payment_status())
        .expect("leaf names are distinct")
}

pub fn shipping_machine() -> BaseMachine<ShippingState, ShippingCommand, Vec<ShippingEvent>> {
    BaseMachine::new(
        "shipping",
        line_topology(
            ShippingState::NotShipped,
            ShippingState::Shipping,
            ShippingState::Delivered,
        ),
        MachineState::of(ShippingState::NotShipped),
        |state: &MachineState<ShippingState>, command| match (state.payload, command) {
            (ShippingState::NotShipped, ShippingCommand::StartShipping) => {
                StepResult::to(vec![ShippingEvent::ShippingStarted], ShippingState::Shipping)
            }
            (ShippingState::Shipping, ShippingCommand::MarkAsDelivered) => {
                StepResult::to(vec![ShippingEvent::ShippingDelivered], ShippingState::Delivered)
            }
            (s, _) => StepResult::to(vec![], s),
        },
    )
    .expect("initial state is in topology")
}

pub fn shipping() -> StateMachine<ShippingCommand, Vec<ShippingEvent>> {
    StateMachine::basic(shipping_machine())
}

pub fn shipping_info_machine() -> BaseMachine<ShippingInfoState, ShippingEvent, Vec<ShippingInfo>> {
    BaseMachine::new(
        "shippingInfo",
        line_topology(
            ShippingInfoState::NotShipped,
            ShippingInfoState::InTransit,
            ShippingInfoState::Delivered,
        ),
        MachineState::of(ShippingInfoState::NotShipped),
        |state: &MachineState<ShippingInfoState>, event| match (state.payload, event) {
            (ShippingInfoState::NotShipped, ShippingEvent::ShippingStarted) => {
                StepResult::to(vec![ShippingInfo::InTransit], ShippingInfoState::InTransit)
            }
            (ShippingInfoState::InTransit, ShippingEvent::ShippingDelivered) => {
                StepResult::to(vec![ShippingInfo::Delivered], ShippingInfoState::Delivered)
            }
            (s, _) => StepResult::to(vec![], s),
        },
    )
    .expect("initial state is in topology")
}

pub fn shipping_info() -> StateMachine<ShippingEvent, Vec<ShippingInfo>> {
    StateMachine::basic(shipping_info_machine())
}

pub fn payment_complete_policy() -> StateMachine<CartEvent, Vec<ShippingCommand>> {
    StateMachine::basic(stateless("paymentCompletePolicy", |event| match event {
        CartEvent::CartPaymentInitiated => vec![],
        CartEvent::CartPaymentCompleted => vec![ShippingCommand::StartShipping],
    }))
}

/// Tags every element of either side's list with its side.
fn merge_tagged<L, R>(lists: Either<Vec<L>, Vec<R>>) -> Vec<Either<L, R>> {
    match lists {
        Either::Left(ls) => ls.into_iter().map(Either::Left).collect(),
        Either::Right(rs) => rs.into_iter().map(Either::Right).collect(),
    }
}

/// The cart aggregate looped with the payment gateway.
pub fn write_model() -> StateMachine<CartCommand, Vec<CartEvent>> {
    cart()
        .feedback(payment_gateway())
        .expect("leaf names are distinct")
}

pub fn write_model_with_shipping(
) -> StateMachine<Either<CartCommand, ShippingCommand>, Vec<Either<CartEvent, ShippingEvent>>> {
    split_choice(write_model(), shipping())
        .and_then(|m| m.rmap("writeModelMerge", merge_tagged))
        .expect("leaf names are distinct")
}

/// [`write_model_with_shipping`] looped with the policy that starts shipping
/// once a payment completes. Shipping events are ignored by the loop.
pub fn write_model_with_policy(
) -> StateMachine<Either<CartCommand, ShippingCommand>, Vec<Either<CartEvent, ShippingEvent>>> {
    let policy = payment_complete_policy()
        .rmap("shippingCommands", |commands: Vec<ShippingCommand>| {
            commands
                .into_iter()
                .map(Either::Right)
                .collect::<Vec<Either<CartCommand, ShippingCommand>>>()
        })
        .expect("leaf names are distinct");
    let ignore = StateMachine::basic(stateless("ignoreShippingEvents", |_: ShippingEvent| {
        Vec::<Either<CartCommand, ShippingCommand>>::new()
    }));
    let backward = fanin("policyMerge", policy, ignore).expect("leaf names are distinct");
    write_model_with_shipping()
        .feedback(backward)
        .expect("leaf names are distinct")
}

pub fn read_model(
) -> StateMachine<Either<CartEvent, ShippingEvent>, Vec<Either<CartView, ShippingInfo>>> {
    split_choice(payment_status(), shipping_info())
        .and_then(|m| m.rmap("readModelMerge", merge_tagged))
        .expect("leaf names are distinct")
}

pub fn cart_and_shipping(
) -> StateMachine<Either<CartCommand, ShippingCommand>, Vec<Either<CartView, ShippingInfo>>> {
    write_model_with_policy()
        .kleisli(read_model())
        .expect("leaf names are distinct")
}
