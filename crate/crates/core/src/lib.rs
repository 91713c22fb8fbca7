pub mod setfam;
pub mod scomplex;
pub mod hexboard;
pub mod hexsolve;
pub mod brouwer;
pub mod dinterval;
pub mod grprops;
pub mod service;
