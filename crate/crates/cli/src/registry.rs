//! Named machine factories the CLI can run and render.

use std::collections::BTreeMap;

use crem::domain::{self, CartCommand, CartEvent, CartView, ShippingCommand, ShippingEvent, ShippingInfo};
use crem::{stateless, RunConfig, StateMachine, StepError, Structure};
use strum::{Display, EnumString};
use thiserror::Error;

use crate::codec::{bare, sided, Codec, CodecError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SessionError {
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Step(#[from] StepError),
}

/// One encoded step: the canonical input text and the encoded outputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodedStep {
    pub input: String,
    pub outputs: Vec<String>,
}

/// A running machine driven through text.
pub trait Session {
    fn step_line(&mut self, line: &str) -> Result<EncodedStep, SessionError>;
    fn structure(&self) -> Structure;
}

struct TypedSession<I, O> {
    machine: StateMachine<I, Vec<O>>,
    cfg: RunConfig,
    input: Codec<I>,
    output: fn(&O) -> String,
}

impl<I: 'static, O: 'static> Session for TypedSession<I, O> {
    fn step_line(&mut self, line: &str) -> Result<EncodedStep, SessionError> {
        let value = (self.input.decode)(line)?;
        let input = (self.input.encode)(&value);
        let (outputs, next) = self.machine.step(value, &self.cfg)?;
        self.machine = next;
        Ok(EncodedStep {
            input,
            outputs: outputs.iter().map(self.output).collect(),
        })
    }

    fn structure(&self) -> Structure {
        self.machine.structure()
    }
}

type Factory = Box<dyn Fn(RunConfig) -> Box<dyn Session> + Send + Sync>;

pub struct MachineRegistryEntry {
    key: String,
    factory: Factory,
}

impl MachineRegistryEntry {
    pub fn key(&self) -> &str {
        &self.key
    }

    /// A fresh session at the machine's initial state.
    pub fn start(&self, cfg: RunConfig) -> Box<dyn Session> {
        (self.factory)(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("machine `{0}` is already registered")]
pub struct DuplicateKey(pub String);

/// Registry keyed by machine name, iterated in sorted order.
#[derive(Default)]
pub struct Registry {
    entries: BTreeMap<String, MachineRegistryEntry>,
}

impl Registry {
    pub fn empty() -> Self {
        Registry::default()
    }

    pub fn register<I: 'static, O: 'static>(
        &mut self,
        key: impl Into<String>,
        factory: fn() -> StateMachine<I, Vec<O>>,
        input: Codec<I>,
        output: fn(&O) -> String,
    ) -> Result<(), DuplicateKey> {
        let key = key.into();
        if self.entries.contains_key(&key) {
            return Err(DuplicateKey(key));
        }
        let entry = MachineRegistryEntry {
            key: key.clone(),
            factory: Box::new(move |cfg| {
                Box::new(TypedSession {
                    machine: factory(),
                    cfg,
                    input,
                    output,
                })
            }),
        };
        self.entries.insert(key, entry);
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&MachineRegistryEntry> {
        self.entries.get(key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

/// Input of the `ping-pong` demo machine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Display, EnumString)]
#[strum(serialize_all = "lowercase")]
pub enum Ball {
    Ping,
}

/// Two machines bouncing every value back to each other forever. Only the
/// feedback cap stops it.
pub fn ping_pong() -> StateMachine<Ball, Vec<Ball>> {
    StateMachine::basic(stateless("ping", |b: Ball| vec![b]))
        .feedback(StateMachine::basic(stateless("pong", |b: Ball| vec![b])))
        .expect("leaf names are distinct")
}

/// Everything the `crem` binary knows about.
pub fn default_registry() -> Registry {
    let mut r = Registry::empty();
    let sided_out = crate::codec::encode_sided::<CartView, ShippingInfo>;
    let results = [
        r.register("cart", domain::cart, bare::<CartCommand>(), crate::codec::encode_bare::<CartEvent>),
        r.register(
            "whole-cart-domain",
            domain::whole_cart_domain,
            bare::<CartCommand>(),
            crate::codec::encode_bare::<CartView>,
        ),
        r.register(
            "cart-and-shipping",
            domain::cart_and_shipping,
            sided::<CartCommand, ShippingCommand>(),
            sided_out,
        ),
        r.register(
            "write-model",
            domain::write_model,
            bare::<CartCommand>(),
            crate::codec::encode_bare::<CartEvent>,
        ),
        r.register(
            "payment-status",
            domain::payment_status,
            bare::<CartEvent>(),
            crate::codec::encode_bare::<CartView>,
        ),
        r.register(
            "shipping",
            domain::shipping,
            bare::<ShippingCommand>(),
            crate::codec::encode_bare::<ShippingEvent>,
        ),
        r.register("ping-pong", ping_pong, bare::<Ball>(), crate::codec::encode_bare::<Ball>),
    ];
    for result in results {
        result.expect("default registry keys are distinct");
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_keys_are_sorted() {
        let r = default_registry();
        let keys: Vec<_> = r.keys().collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for required in ["cart", "whole-cart-domain", "cart-and-shipping"] {
            assert!(keys.contains(&required));
        }
    }

    #[test]
    fn duplicate_key_is_rejected() {
        let mut r = Registry::empty();
        r.register("cart", domain::cart, bare(), crate::codec::encode_bare::<CartEvent>)
            .unwrap();
        assert_eq!(
            r.register("cart", domain::cart, bare(), crate::codec::encode_bare::<CartEvent>),
            Err(DuplicateKey("cart".into()))
        );
    }

    #[test]
    fn factory_starts_fresh() {
        let r = default_registry();
        let entry = r.get("whole-cart-domain").unwrap();
        let mut a = entry.start(RunConfig::default());
        assert_eq!(a.step_line("PayCart").unwrap().outputs.len(), 2);
        assert!(a.step_line("PayCart").unwrap().outputs.is_empty());
        let mut b = entry.start(RunConfig::default());
        assert_eq!(b.step_line(" PayCart ").unwrap().input, "PayCart");
        let _ = b;
    }

    #[test]
    fn ping_pong_overflows() {
        let mut s = default_registry()
            .get("ping-pong")
            .unwrap()
            .start(RunConfig::new(7).unwrap());
        assert_eq!(
            s.step_line("ping").unwrap_err(),
            SessionError::Step(StepError::FeedbackOverflow { cap: 7 })
        );
    }
}
