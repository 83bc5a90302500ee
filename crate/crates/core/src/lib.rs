pub mod bdd;
pub mod bench;
pub mod besteffort;
pub mod dfa;
pub mod error;
pub mod games;
pub mod ltlf;
pub mod runtime;
pub mod symbolic;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/automata.md")]
    mod automata {}
    #[doc = include_str!("../../../book/src/bdd.md")]
    mod bdd {}
    #[doc = include_str!("../../../book/src/symbolic.md")]
    mod symbolic {}
    #[doc = include_str!("../../../book/src/games.md")]
    mod games {}
    #[doc = include_str!("../../../book/src/best-effort.md")]
    mod best_effort {}
    #[doc = include_str!("../../../book/src/runtime.md")]
    mod runtime {}
    #[doc = include_str!("../../../book/src/benchmarks.md")]
    mod benchmarks {}
}
