use crem::domain::{self, CartCommand, CartEvent, CartState, CartView, ShippingCommand};
use crem::{BaseMachine, MachineState, StepResult, identity_machine, stateless, unrestricted_mealy, Either, RunConfig, StateMachine};
use proptest::prelude::*;

fn cfg() -> RunConfig {
    RunConfig::default()
}

/// Stateless machine backed by a lookup table.
fn table(name: &str, t: Vec<u8>) -> StateMachine<u8, u8> {
    StateMachine::basic(stateless(name, move |x: u8| t[x as usize % t.len()]))
}

fn list_table(name: &str, t: Vec<Vec<u8>>) -> StateMachine<u8, Vec<u8>> {
    StateMachine::basic(stateless(name, move |x: u8| t[x as usize % t.len()].clone()))
}

/// Stateful machine: output and next state both come from a table indexed by (state, input).
fn mealy_table(name: &str, t: Vec<(u8, u8)>) -> StateMachine<u8, u8> {
    StateMachine::basic(unrestricted_mealy(name, 0u8, move |s: &u8, x: u8| {
        let (o, n) = t[(*s as usize * 7 + x as usize) % t.len()];
        (o, n % 5)
    }))
}

fn unit(name: &str) -> StateMachine<u8, Vec<u8>> {
    StateMachine::basic(stateless(name, |x: u8| vec![x]))
}

/// The cart aggregate under another leaf name, so it can appear twice in one tree.
fn second_cart() -> StateMachine<CartCommand, Vec<CartEvent>> {
    StateMachine::basic(
        BaseMachine::new(
            "otherCart",
            domain::cart_topology(),
            MachineState::of(CartState::WaitingForPayment),
            |s: &MachineState<CartState>, c| {
                let (events, next) = domain::cart_action(s.payload, c);
                StepResult::to(events, next)
            },
        )
        .unwrap(),
    )
}

fn bytes() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 1..8)
}

fn lists() -> impl Strategy<Value = Vec<Vec<u8>>> {
    prop::collection::vec(prop::collection::vec(any::<u8>(), 0..3), 1..6)
}

fn trace() -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(any::<u8>(), 0..=20)
}

fn commands() -> impl Strategy<Value = Vec<CartCommand>> {
    prop::collection::vec(
        prop::sample::select(vec![CartCommand::PayCart, CartCommand::MarkCartAsPaid]),
        0..=20,
    )
}

proptest! {
    #[test]
    fn sequential_identity(t in prop::collection::vec((any::<u8>(), any::<u8>()), 1..12), xs in trace()) {
        let m = || mealy_table("m", t.clone());
        let expected = m().run_trace(xs.clone(), &cfg()).unwrap();
        let left = identity_machine().sequential(m()).unwrap();
        let right = m().sequential(identity_machine()).unwrap();
        prop_assert_eq!(left.run_trace(xs.clone(), &cfg()).unwrap(), expected.clone());
        prop_assert_eq!(right.run_trace(xs, &cfg()).unwrap(), expected);
    }

    #[test]
    fn sequential_associativity(f in bytes(), g in prop::collection::vec((any::<u8>(), any::<u8>()), 1..12), h in bytes(), xs in trace()) {
        let left = table("f", f.clone())
            .sequential(mealy_table("g", g.clone()))
            .unwrap()
            .sequential(table("h", h.clone()))
            .unwrap();
        let right = table("f", f)
            .sequential(mealy_table("g", g).sequential(table("h", h)).unwrap())
            .unwrap();
        prop_assert_eq!(left.run_trace(xs.clone(), &cfg()).unwrap(), right.run_trace(xs, &cfg()).unwrap());
    }

    #[test]
    fn kleisli_unit(t in lists(), xs in trace()) {
        let m = || list_table("m", t.clone());
        let expected = m().run_trace(xs.clone(), &cfg()).unwrap();
        prop_assert_eq!(unit("u").kleisli(m()).unwrap().run_trace(xs.clone(), &cfg()).unwrap(), expected.clone());
        prop_assert_eq!(m().kleisli(unit("u")).unwrap().run_trace(xs, &cfg()).unwrap(), expected);
    }

    #[test]
    fn kleisli_associativity(f in lists(), g in lists(), h in lists(), xs in trace()) {
        let left = list_table("f", f.clone())
            .kleisli(list_table("g", g.clone()))
            .unwrap()
            .kleisli(list_table("h", h.clone()))
            .unwrap();
        let right = list_table("f", f)
            .kleisli(list_table("g", g).kleisli(list_table("h", h)).unwrap())
            .unwrap();
        prop_assert_eq!(left.run_trace(xs.clone(), &cfg()).unwrap(), right.run_trace(xs, &cfg()).unwrap());
    }

    #[test]
    fn kleisli_laws_with_stateful_domain_machines(xs in commands()) {
        let cart_unit = || StateMachine::basic(stateless("u", |c: CartCommand| vec![c]));
        let expected = domain::cart().run_trace(xs.clone(), &cfg()).unwrap();
        prop_assert_eq!(cart_unit().kleisli(domain::cart()).unwrap().run_trace(xs.clone(), &cfg()).unwrap(), expected);

        let left = domain::cart()
            .kleisli(domain::payment_gateway())
            .unwrap()
            .kleisli(second_cart())
            .unwrap();
        let right = domain::cart()
            .kleisli(
                domain::payment_gateway()
                    .kleisli(second_cart())
                    .unwrap(),
            )
            .unwrap();
        prop_assert_eq!(left.run_trace(xs.clone(), &cfg()).unwrap(), right.run_trace(xs, &cfg()).unwrap());
    }

    #[test]
    fn rmap_composes(t in bytes(), xs in trace()) {
        let g = |x: u8| x.wrapping_mul(3);
        let h = |x: u8| x ^ 0x5a;
        let nested = table("m", t.clone()).rmap("g", g).unwrap().rmap("h", h).unwrap();
        let fused = table("m", t).rmap("gh", move |x| h(g(x))).unwrap();
        prop_assert_eq!(nested.run_trace(xs.clone(), &cfg()).unwrap(), fused.run_trace(xs, &cfg()).unwrap());
    }

    #[test]
    fn whole_cart_domain_settles_after_first_payment(xs in commands()) {
        let mut inputs = vec![CartCommand::PayCart];
        inputs.extend(xs);
        inputs.push(CartCommand::PayCart);
        let out = domain::whole_cart_domain().run_trace(inputs, &cfg()).unwrap();
        prop_assert_eq!(&out[0], &vec![CartView::PaymentInProgress, CartView::PaymentDone]);
        prop_assert!(out[1..].iter().all(Vec::is_empty));
    }

    #[test]
    fn cart_views_progress_monotonically(xs in commands()) {
        let views: Vec<CartView> = domain::whole_cart_domain()
            .run_trace(xs, &cfg())
            .unwrap()
            .into_iter()
            .flatten()
            .collect();
        let full = [CartView::PaymentInProgress, CartView::PaymentDone];
        prop_assert!(views.len() <= 2);
        prop_assert_eq!(&views[..], &full[..views.len()]);
    }

    #[test]
    fn shipping_commands_do_not_disturb_cart_side(
        xs in prop::collection::vec(
            prop::sample::select(vec![
                Either::Left(CartCommand::PayCart),
                Either::Left(CartCommand::MarkCartAsPaid),
                Either::Right(ShippingCommand::StartShipping),
                Either::Right(ShippingCommand::MarkAsDelivered),
            ]),
            0..=20,
        )
    ) {
        let out = domain::cart_and_shipping().run_trace(xs.clone(), &cfg()).unwrap();
        let cart_side: Vec<Vec<CartView>> = xs
            .iter()
            .zip(&out)
            .filter(|(x, _)| x.is_left())
            .map(|(_, o)| o.iter().filter_map(|v| v.left()).collect())
            .collect();
        let cart_only: Vec<CartCommand> = xs.iter().filter_map(|x| x.left()).collect();
        let expected = domain::whole_cart_domain().run_trace(cart_only, &cfg()).unwrap();
        prop_assert_eq!(cart_side, expected);
    }
}

#[test]
fn cart_events_pass_through_write_model() {
    let out = domain::write_model()
        .run_trace([CartCommand::PayCart], &cfg())
        .unwrap();
    assert_eq!(
        out,
        vec![vec![CartEvent::CartPaymentInitiated, CartEvent::CartPaymentCompleted]]
    );
}
