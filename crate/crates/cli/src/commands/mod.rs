pub mod field;
pub mod levels;
pub mod scan;
pub mod selftest;
pub mod simulate;
