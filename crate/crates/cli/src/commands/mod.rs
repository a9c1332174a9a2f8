pub mod bench;
pub mod evolve;
pub mod gradcheck;
pub mod loss;
pub mod metrics;
pub mod synth;
