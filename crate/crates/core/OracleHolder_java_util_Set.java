import java.io.*;
import java.math.*;
import java.util.*;
import java.util.concurrent.*;
import java.util.function.*;
import java.util.regex.*;
import java.util.stream.*;

public class OracleHolder_java_util_Set {

    // oracle: java.util.Set.size()#1
    public static <E> boolean checkSizeMatchesStream(Set<E> set) {
        int actual = set.stream().count();
        return actual == set.size();
    }

    // oracle: java.util.Set.size()#2
    public static <E> boolean checkSizeNonNegative(Set<E> set) {
        return set.size() >= 0;
    }

    // oracle: java.util.Set.isEmpty()#1
    public static <E> boolean checkIsEmptyMatchesSize(Set<E> set) {
        return set.isEmpty() == (set.size() == 0);
    }

    // oracle: java.util.Set.contains(Object)#1
    public static <E> boolean checkContainsIteratedElement(Set<E> set) {
        for (E e : set) {
            if (!set.contains(e)) {
                return false;
            }
        }
        return true;
    }

    // oracle: java.util.Set.contains(Object)#2
    public static <E> boolean checkContainsIncompatibleType(Set<E> set, Object o) {
        try {
            set.contains(o);
            return true;
        } catch (ClassCastException e) {
            return true;
        } catch (NullPointerException e) {
            return o == null;
        }
    }

    // oracle: java.util.Set.add(E)#1
    public static <E> boolean checkAddNewElement(Set<E> set, E e) {
        if (set.contains(e)) return true;
        int before = set.size();
        boolean changed = set.add(e);
        return changed && set.contains(e) && set.size() == before + 1;
    }

    // oracle: java.util.Set.add(E)#2
    public static <E> boolean checkAddDuplicateReturnsFalse(Set<E> set, E e) {
        if (!set.contains(e)) return true;
        int before = set.size();
        return !set.add(e) && set.size() == before;
    }

    // oracle: java.util.Set.add(E)#3
    public static <E> boolean checkAddUnsupported(E e) {
        Set<E> unmodifiable = Collections.unmodifiableSet(new HashSet<>());
        try {
            unmodifiable.add(e);
            return false;
        } catch (UnsupportedOperationException ex) {
            return true;
        }
    }

    // oracle: java.util.Set.remove(Object)#1
    // Removing a present element shrinks the set by one
    public static <E> boolean checkRemovePresent(Set<E> set, Object o) {
        if (!set.contains(o)) return true;
        int before = set.size();
        return set.remove(o) && !set.contains(o) && set.size() == before - 1;
    }

    // oracle: java.util.Set.remove(Object)#2
    // Removing an absent element leaves the set unchanged
    public static <E> boolean checkRemoveAbsent(Set<E> set, Object o) {
        if (set.contains(o)) return true;
        int before = set.size();
        return !set.remove(o) && set.size() == before;
    }
}
