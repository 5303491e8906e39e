pub mod diagrams;
pub mod emit;
pub mod error;
pub mod farey;
pub mod hooper;
pub mod linalg;
pub mod perm;
pub mod renorm;
pub mod surface;
pub mod tracer;
pub mod verify;
