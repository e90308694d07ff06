//! Exact arithmetic for factorizations `C = P(A - 1)S + 1` of finite maximal
//! codes over the alphabet `{a, b}`, and for the Krasner and Hajós
//! factorizations of cyclic groups that parameterize them.

pub mod cli;
pub mod codes;
pub mod construct;
pub mod cyclic;
pub mod factorization;
pub mod fixtures;
pub mod json;
pub mod ncpoly;
pub mod upoly;
