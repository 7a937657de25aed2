pub mod bound;
pub mod grid;
pub mod profile;
pub mod scan;
pub mod verify;
