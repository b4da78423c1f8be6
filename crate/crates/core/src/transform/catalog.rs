use super::{Category, Strategy};
use crate::syntax::Language;

const BOTH: &[Language] = &[Language::Java, Language::Python];
const JAVA: &[Language] = &[Language::Java];
const PYTHON: &[Language] = &[Language::Python];

macro_rules! s {
    ($id:literal, $cat:ident, $langs:ident, $name:literal, $desc:literal) => {
        Strategy {
            id: $id,
            category: Category::$cat,
            languages: $langs,
            name: $name,
            description: $desc,
        }
    };
}

pub(super) static STRATEGIES: [Strategy; 32] = [
    s!(
        "B-1",
        Block,
        BOTH,
        "For statement",
        "rewrite a for loop as an equivalent while loop"
    ),
    s!(
        "B-2",
        Block,
        JAVA,
        "While statement",
        "rewrite a while loop as an equivalent for loop"
    ),
    s!(
        "B-3",
        Block,
        BOTH,
        "Elseif to if else",
        "collapse `else { if ... }` into `else if ...`"
    ),
    s!(
        "B-4",
        Block,
        BOTH,
        "Else if to elseif",
        "expand `else if ...` into `else { if ... }`"
    ),
    s!(
        "B-5",
        Block,
        BOTH,
        "If to else",
        "negate an if condition and swap its then and else blocks"
    ),
    s!(
        "B-6",
        Block,
        BOTH,
        "Change if statement",
        "split an if on a short-circuit AND into nested ifs"
    ),
    s!(
        "B-7",
        Block,
        PYTHON,
        "Create new function",
        "move a variable initialization into a new function and call it"
    ),
    s!(
        "ID-1",
        InsertDelete,
        BOTH,
        "Add comments",
        "insert a comment unrelated to the code"
    ),
    s!(
        "ID-2",
        InsertDelete,
        BOTH,
        "Add junk code",
        "insert dead code unrelated to the code"
    ),
    s!(
        "ID-3",
        InsertDelete,
        BOTH,
        "Add return statement",
        "append a return of the default value"
    ),
    s!(
        "ID-4",
        InsertDelete,
        BOTH,
        "Import library",
        "import a library the code does not use"
    ),
    s!(
        "ID-5",
        InsertDelete,
        BOTH,
        "Delete comment",
        "remove every comment"
    ),
    s!(
        "ID-6",
        InsertDelete,
        BOTH,
        "Delete print",
        "replace print statements with empty statements"
    ),
    s!(
        "ID-7",
        InsertDelete,
        BOTH,
        "Remove unused variable",
        "drop declarations of variables that are never used"
    ),
    s!(
        "GS-1",
        GrammaticalStatement,
        BOTH,
        "Change return statement",
        "return a literal through a fresh variable"
    ),
    s!(
        "GS-2",
        GrammaticalStatement,
        JAVA,
        "For move in variable declaration",
        "move a loop variable declaration into the for header"
    ),
    s!(
        "GS-3",
        GrammaticalStatement,
        JAVA,
        "For move out variable declaration",
        "move a loop variable declaration out of the for header"
    ),
    s!(
        "GS-4",
        GrammaticalStatement,
        JAVA,
        "Change variable declaration",
        "split a declaration from its initialization"
    ),
    s!(
        "GS-5",
        GrammaticalStatement,
        BOTH,
        "Add logical operator",
        "negate the complementary comparison"
    ),
    s!(
        "GS-6",
        GrammaticalStatement,
        BOTH,
        "Change comparison operator",
        "swap comparison operands and mirror the operator"
    ),
    s!(
        "GS-7",
        GrammaticalStatement,
        BOTH,
        "Change argument assignment operator",
        "expand a compound assignment"
    ),
    s!(
        "GS-8",
        GrammaticalStatement,
        JAVA,
        "Change the unary operator",
        "rewrite an increment or decrement statement as an assignment"
    ),
    s!(
        "GS-9",
        GrammaticalStatement,
        JAVA,
        "Add curly bracket",
        "wrap a single-statement body in braces"
    ),
    s!(
        "GS-10",
        GrammaticalStatement,
        JAVA,
        "Delete curly bracket",
        "unwrap a braced body holding a single statement"
    ),
    s!(
        "GT-1",
        GrammaticalToken,
        PYTHON,
        "Bool to int",
        "replace True/False with 1/0"
    ),
    s!(
        "GT-2",
        GrammaticalToken,
        PYTHON,
        "Int to bool",
        "replace 1/0 with True/False"
    ),
    s!(
        "GT-3",
        GrammaticalToken,
        BOTH,
        "Upper integral type",
        "widen an integral type"
    ),
    s!(
        "GT-4",
        GrammaticalToken,
        BOTH,
        "Upper floating type",
        "widen to a floating type"
    ),
    s!(
        "GT-5",
        GrammaticalToken,
        PYTHON,
        "Change input API",
        "read input through a different API"
    ),
    s!(
        "GT-6",
        GrammaticalToken,
        BOTH,
        "Change output API",
        "write output through a different API"
    ),
    s!(
        "I-1",
        Identifier,
        BOTH,
        "Function rename",
        "rename functions and classes to placeholders"
    ),
    s!(
        "I-2",
        Identifier,
        BOTH,
        "Variable rename",
        "rename variables to placeholders"
    ),
];
