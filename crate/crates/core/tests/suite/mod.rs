mod cli;
mod fixtures;
mod properties;
