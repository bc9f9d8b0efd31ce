pub use repcat_core;
