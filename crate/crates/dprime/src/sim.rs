//! AWGN simulation.
