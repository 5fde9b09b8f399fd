pub mod experiments;
pub mod magic;
pub mod numtheory;
pub mod selftest;
pub mod simulator;
