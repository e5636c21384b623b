//! Runs every code block in the guide as a doctest, so the book can never
//! drift from the library. Each chapter gets its own module to make test
//! failures traceable.

#[doc = include_str!("../../../book/src/introduction.md")]
mod introduction {}

#[doc = include_str!("../../../book/src/states-and-channels.md")]
mod states_and_channels {}

#[doc = include_str!("../../../book/src/transformation-operators.md")]
mod transformation_operators {}

#[doc = include_str!("../../../book/src/classification.md")]
mod classification {}

#[doc = include_str!("../../../book/src/protocol-simulation.md")]
mod protocol_simulation {}

#[doc = include_str!("../../../book/src/command-line.md")]
mod command_line {}
