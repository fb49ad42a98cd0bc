pub mod arm_oracle;
pub mod events;
pub mod hamming_oracle;
pub mod kernels;
