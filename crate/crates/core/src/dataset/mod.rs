//! Alphabets, font indexes, class splits and the on-disk dataset layout.

mod alphabet;
mod generate;
mod index;
mod layout;
mod split;

pub use alphabet::{Alphabet, AlphabetSection};
pub use generate::{generate, generate_dataset, plan_classes, ClassPlan, GenerateOptions};
pub use index::{build_index, index_registry, AlphabetIndex};
pub use layout::{
    csv_header, validate_dataset, write_dataset, DatasetLayout, DatasetSummary, LabelTable, DATA_DIR, LABEL_DIR,
    LABEL_FILE,
};
pub use split::{split_classes, split_sizes};
