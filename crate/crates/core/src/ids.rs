//! Index newtypes for cells of tabulated structures.
//!
//! Every cell is identified by its position in the owning table. Ids are only
//! meaningful relative to the structure that issued them.

use std::fmt;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }

            #[inline]
            pub fn from_index(i: usize) -> Self {
                $name(i as u32)
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(
    /// A 0-cell of a bicategory.
    Ob,
    "ob"
);
id_type!(
    /// A 1-cell of a bicategory.
    One,
    "one"
);
id_type!(
    /// A 2-cell of a bicategory.
    Two,
    "two"
);
id_type!(
    /// An object of a 1-category.
    Obj,
    "obj"
);
id_type!(
    /// A morphism of a 1-category.
    Mor,
    "mor"
);
