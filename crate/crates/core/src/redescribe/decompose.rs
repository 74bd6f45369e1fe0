use super::{diagnostics_text, synthesize, Phase, PhaseReport, RedescribeError};
use crate::ir::{validate_set, Binding, ConceptUnit, Level, GLOBALS};

const E2_OPERATIONS: [&str; 3] = ["Index", "OneToOneMap", "Counting"];

/// Split the E2 counting skill into cooperating concepts: ordinal numbers,
/// sets with a conserved cardinal sum, and counting proper with one-to-one
/// matching between two sets.
pub fn decompose_to_e3(e2: &[ConceptUnit]) -> Result<(Vec<ConceptUnit>, PhaseReport), RedescribeError> {
    let not_e2 = RedescribeError::NotE2;
    if let Some(u) = e2.iter().find(|u| u.level != Level::E2) {
        return Err(not_e2(format!("{} is at level {}", u.name, u.level)));
    }
    let diags = validate_set(e2);
    if !diags.is_empty() {
        return Err(not_e2(diagnostics_text(&diags)));
    }
    let counting = e2
        .iter()
        .find(|u| !u.is_globals() && E2_OPERATIONS.iter().all(|op| u.operation(op).is_some()))
        .ok_or_else(|| not_e2("no unit offers Index, OneToOneMap and Counting".into()))?;
    let numlist = e2
        .iter()
        .filter(|u| u.name == GLOBALS)
        .flat_map(|u| &u.attributes)
        .find(|a| a.is_const() && a.type_ref.as_str() == "intList")
        .map(|a| a.name.clone())
        .ok_or_else(|| not_e2("no shared numeral list".into()))?;
    let p = counting
        .attributes
        .iter()
        .find(|a| matches!(a.binding, Binding::Var(_)) && a.type_ref.as_str() == "Person")
        .map(|a| a.name.clone())
        .ok_or_else(|| not_e2(format!("{} has no actor", counting.name)))?;

    let mut inputs: Vec<String> = e2.iter().map(|u| u.name.clone()).collect();
    inputs.sort();
    let mut report = PhaseReport::new(Phase::P3, inputs);
    report.rule("extract", format!("OrdinalNumber from {numlist} with current, pre and succ"));
    report.rule("extract", "Set with objlist, irrelevance flags and a conserved cardinalSum");
    report.rule("rebind", format!("{}.Counting counts set1 and records its cardinalSum", counting.name));
    report.rule("synthesize", "OneToOneMap(set1, set2) and Can_Match_Discretely(set1, set2)");
    report.rule("publish", "every member public");
    report.drop("GetResult", "subsumed by the cardinalSum of the counted set");
    report.drop("Index", "selection folded into Counting");

    let text = format!(
        "@level(E3)
@domain(numbers)
class OrdinalNumber {{
public:
    const intList {numlist};
    int current, pre, succ;
    int GetPre() {{
        pre = current - 1;
        return pre;
    }}
    int GetNext() {{
        succ = current + 1;
        return succ;
    }}
    int GetCurrent() {{
        return current;
    }}
}}

@level(E3)
@domain(numbers)
class Set {{
public:
    objectList objlist;
    Boolean item_type_be_similar = NO_OBLIGATORY;
    Boolean item_sequence = NO_IMPORTANT;
    Boolean item_arrangement = NO_IMPORTANT;
    int cardinalSum;
}}

@level(E3)
@domain(numbers)
class Counting {{
public:
    friend {numlist};
    friend OrdinalNumber;
    Person {p};
    Set set1, set2;
    int Counting() {{
        if (set1.cardinalSum != NULL && set1.item_arrangement == \"NO_IMPORTANT\") {{
            return set1.cardinalSum;
        }}
        int result;
        result = 0;
        objectList items;
        items = set1.objlist;
        while (!items.Empty()) {{
            Object item;
            item = items.SelectOneRandom();
            {p}.PointTo(item);
            if (result == 0) {{
                {p}.Say({numlist}.First());
            }} else {{
                {p}.Say({numlist}.Next());
            }}
            items.Delete(item);
            result++;
        }}
        set1.cardinalSum = result;
        return result;
    }}
    Boolean Can_Match_Discretely(Set set1, Set set2) {{
        objectList left;
        left = set1.objlist;
        objectList right;
        right = set2.objlist;
        while (!left.Empty() && !right.Empty()) {{
            Object x;
            Object y;
            x = left.SelectOneRandom();
            y = right.SelectOneRandom();
            left.Delete(x);
            right.Delete(y);
        }}
        return left.Empty() && right.Empty();
    }}
    int OneToOneMap(Set set1, Set set2) {{
        objectList left;
        left = set1.objlist;
        objectList right;
        right = set2.objlist;
        while (!left.Empty() && !right.Empty()) {{
            Object x;
            Object y;
            x = left.SelectOneRandom();
            y = right.SelectOneRandom();
            left.Delete(x);
            right.Delete(y);
        }}
        if (left.Empty() && right.Empty()) {{
            set2.cardinalSum = set1.cardinalSum;
            return 0;
        }}
        if (!left.Empty()) {{
            return 1;
        }}
        return 2;
    }}
    void FetchObjects(Set source, int k) {{
        set1 = source;
        if (Counting() < k) {{
            {p}.Say(\"Error\");
        }} else {{
            int i;
            i = 0;
            objectList items;
            items = source.objlist;
            while (i < k) {{
                Object item;
                item = items.SelectOneRandom();
                {p}.TakeAway(item);
                items.Delete(item);
                i++;
            }}
        }}
    }}
}}
"
    );
    let units = synthesize(&text).map_err(not_e2)?;
    report.outputs = units.iter().map(|u| u.name.clone()).collect();
    Ok((units, report))
}
