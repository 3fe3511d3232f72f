//! Text encodings of machine inputs and outputs, one value per line.
//!
//! Single-domain machines use bare variant names (`PayCart`). Either-typed
//! values carry a side prefix (`cart PayCart`, `ship StartShipping`).

use std::fmt::Display;
use std::str::FromStr;

use crem::Either;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot decode `{text}`: {reason}")]
pub struct CodecError {
    pub text: String,
    pub reason: String,
}

impl CodecError {
    fn new(text: &str, reason: impl Into<String>) -> Self {
        CodecError {
            text: text.to_owned(),
            reason: reason.into(),
        }
    }
}

/// Decoder and encoder for one value type.
pub struct Codec<T> {
    pub decode: fn(&str) -> Result<T, CodecError>,
    pub encode: fn(&T) -> String,
}

impl<T> Clone for Codec<T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for Codec<T> {}

pub const CART_PREFIX: &str = "cart";
pub const SHIP_PREFIX: &str = "ship";

/// `FromStr` on the trimmed line; no other tokens allowed.
pub fn decode_bare<T: FromStr>(line: &str) -> Result<T, CodecError> {
    let token = line.trim();
    if token.is_empty() || token.contains(char::is_whitespace) {
        return Err(CodecError::new(line, "expected a single variant name"));
    }
    token
        .parse()
        .map_err(|_| CodecError::new(line, format!("unknown variant `{token}`")))
}

pub fn encode_bare<T: Display>(value: &T) -> String {
    value.to_string()
}

pub fn bare<T: FromStr + Display>() -> Codec<T> {
    Codec {
        decode: decode_bare::<T>,
        encode: encode_bare::<T>,
    }
}

/// `cart <L>` or `ship <R>`.
pub fn decode_sided<L: FromStr, R: FromStr>(line: &str) -> Result<Either<L, R>, CodecError> {
    let mut tokens = line.split_whitespace();
    let (Some(side), Some(value), None) = (tokens.next(), tokens.next(), tokens.next()) else {
        return Err(CodecError::new(
            line,
            format!("expected `{CART_PREFIX} <variant>` or `{SHIP_PREFIX} <variant>`"),
        ));
    };
    let unknown = || CodecError::new(line, format!("unknown variant `{value}`"));
    match side {
        CART_PREFIX => value.parse().map(Either::Left).map_err(|_| unknown()),
        SHIP_PREFIX => value.parse().map(Either::Right).map_err(|_| unknown()),
        other => Err(CodecError::new(line, format!("unknown prefix `{other}`"))),
    }
}

pub fn encode_sided<L: Display, R: Display>(value: &Either<L, R>) -> String {
    match value {
        Either::Left(l) => format!("{CART_PREFIX} {l}"),
        Either::Right(r) => format!("{SHIP_PREFIX} {r}"),
    }
}

pub fn sided<L: FromStr + Display, R: FromStr + Display>() -> Codec<Either<L, R>> {
    Codec {
        decode: decode_sided::<L, R>,
        encode: encode_sided::<L, R>,
    }
}

/// `[a, b, c]`, as printed by `run`.
pub fn format_outputs(outputs: &[String]) -> String {
    format!("[{}]", outputs.join(", "))
}
