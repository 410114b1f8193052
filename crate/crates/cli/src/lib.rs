pub mod config;
pub mod corpus;
pub mod datagen;
pub mod report;
