pub use litmood;
