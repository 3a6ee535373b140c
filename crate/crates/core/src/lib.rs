pub mod cli;
pub mod complex;
pub mod error;
pub mod flatends;
pub mod formats;
pub mod hodge;
pub mod linalg;
pub mod models;
pub mod pairs;
