# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled mirrors of the pure-Python kernels.

These functions must consume the identical splitmix64 stream and return
identical results to _kernels_py; the parity tests hold them to that.
Callers marshal UniverseTables and Plan objects into the flat arrays
these signatures take (see engine.__init__).
"""

from libc.stdint cimport uint64_t
from libc.stdlib cimport free, malloc

DEF OP_LOADV = 0
DEF OP_LOADF = 1
DEF OP_CONST = 2
DEF OP_MEET = 3
DEF OP_JOIN = 4


cdef inline uint64_t _next(uint64_t *state):
    cdef uint64_t z
    state[0] = state[0] + <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline void _eval_mask(signed char[:] ops, int[:] args, int start, int end,
                            int *vh, uint64_t *vm,
                            int[:] fixed_h, uint64_t[:] fixed_m,
                            int[:] sizes, int[:] pair_off, int[:] proj_data,
                            int H, int full, uint64_t all_mask,
                            int *sh, uint64_t *sm) nogil:
    cdef int sp = -1
    cdef int i, op, arg, h1, h2, hu, hi, t, off1, off2, size
    cdef uint64_t m1, m2, r
    for i in range(start, end):
        op = ops[i]
        arg = args[i]
        if op == OP_LOADV:
            sp += 1
            sh[sp] = vh[arg]
            sm[sp] = vm[arg]
        elif op == OP_LOADF:
            sp += 1
            sh[sp] = fixed_h[arg]
            sm[sp] = fixed_m[arg]
        elif op == OP_CONST:
            sp += 1
            if arg == 0:
                sh[sp] = 0; sm[sp] = 0
            elif arg == 1:
                sh[sp] = 0; sm[sp] = 1
            elif arg == 2:
                sh[sp] = full; sm[sp] = 0
            else:
                sh[sp] = full; sm[sp] = all_mask
        elif op == OP_MEET:
            h2 = sh[sp]; m2 = sm[sp]
            sp -= 1
            h1 = sh[sp]; m1 = sm[sp]
            hu = h1 | h2
            if h1 == h2:
                r = m1 & m2
            else:
                off1 = pair_off[hu * H + h1]
                off2 = pair_off[hu * H + h2]
                size = sizes[hu]
                r = 0
                for t in range(size):
                    if ((m1 >> proj_data[off1 + t]) & 1) and ((m2 >> proj_data[off2 + t]) & 1):
                        r = r | ((<uint64_t>1) << t)
            sh[sp] = hu; sm[sp] = r
        else:
            h2 = sh[sp]; m2 = sm[sp]
            sp -= 1
            h1 = sh[sp]; m1 = sm[sp]
            hi = h1 & h2
            if h1 == h2:
                r = m1 | m2
            else:
                r = 0
                off1 = pair_off[h1 * H + hi]
                size = sizes[h1]
                for t in range(size):
                    if (m1 >> t) & 1:
                        r = r | ((<uint64_t>1) << proj_data[off1 + t])
                off2 = pair_off[h2 * H + hi]
                size = sizes[h2]
                for t in range(size):
                    if (m2 >> t) & 1:
                        r = r | ((<uint64_t>1) << proj_data[off2 + t])
            sh[sp] = hi; sm[sp] = r


def run_check(int k, int[:] sizes, int[:] pair_off, int[:] proj_data,
              signed char[:] ops, int[:] args, int[:] bounds, int n_eq,
              int nv, int n_groups, bint grouped, int[:] groups,
              int[:] fixed_h, unsigned long long[:] fixed_m,
              int trials, unsigned long long seed):
    """Mirror of _kernels_py.run_check over pre-flattened tables and plan."""
    cdef uint64_t state = seed
    cdef int H = 1 << k
    cdef int full = H - 1
    cdef int full_size = sizes[full]
    cdef uint64_t all_mask
    if full_size >= 64:
        all_mask = <uint64_t>0 - 1
    else:
        all_mask = ((<uint64_t>1) << full_size) - 1

    cdef int max_len = 0
    cdef int e
    for e in range(2 * n_eq):
        if bounds[e + 1] - bounds[e] > max_len:
            max_len = bounds[e + 1] - bounds[e]

    cdef int *vh = <int *>malloc(sizeof(int) * (nv if nv > 0 else 1))
    cdef uint64_t *vm = <uint64_t *>malloc(sizeof(uint64_t) * (nv if nv > 0 else 1))
    cdef int *gh = <int *>malloc(sizeof(int) * (n_groups if n_groups > 0 else 1))
    cdef int *sh1 = <int *>malloc(sizeof(int) * (max_len if max_len > 0 else 1))
    cdef uint64_t *sm1 = <uint64_t *>malloc(sizeof(uint64_t) * (max_len if max_len > 0 else 1))
    cdef int *sh2 = <int *>malloc(sizeof(int) * (max_len if max_len > 0 else 1))
    cdef uint64_t *sm2 = <uint64_t *>malloc(sizeof(uint64_t) * (max_len if max_len > 0 else 1))
    if vh == NULL or vm == NULL or gh == NULL or sh1 == NULL or sm1 == NULL or sh2 == NULL or sm2 == NULL:
        free(vh); free(vm); free(gh); free(sh1); free(sm1); free(sh2); free(sm2)
        raise MemoryError()

    cdef int trial, g, i, s, ok
    cdef long long premise_hits = 0
    cdef object witness = None
    cdef int found = 0
    cdef int found_trial = trials

    try:
        for trial in range(trials):
            if grouped and trial % 2 == 0:
                for g in range(n_groups):
                    gh[g] = <int>(_next(&state) & <uint64_t>(H - 1))
                for i in range(nv):
                    vh[i] = gh[groups[i]]
            else:
                for i in range(nv):
                    vh[i] = <int>(_next(&state) & <uint64_t>(H - 1))
            for i in range(nv):
                s = sizes[vh[i]]
                if s >= 64:
                    vm[i] = _next(&state)
                else:
                    vm[i] = _next(&state) & (((<uint64_t>1) << s) - 1)

            ok = 1
            for e in range(n_eq - 1):
                _eval_mask(ops, args, bounds[2 * e], bounds[2 * e + 1], vh, vm,
                           fixed_h, fixed_m, sizes, pair_off, proj_data,
                           H, full, all_mask, sh1, sm1)
                _eval_mask(ops, args, bounds[2 * e + 1], bounds[2 * e + 2], vh, vm,
                           fixed_h, fixed_m, sizes, pair_off, proj_data,
                           H, full, all_mask, sh2, sm2)
                if sh1[0] != sh2[0] or sm1[0] != sm2[0]:
                    ok = 0
                    break
            if not ok:
                continue
            premise_hits += 1
            _eval_mask(ops, args, bounds[2 * n_eq - 2], bounds[2 * n_eq - 1], vh, vm,
                       fixed_h, fixed_m, sizes, pair_off, proj_data,
                       H, full, all_mask, sh1, sm1)
            _eval_mask(ops, args, bounds[2 * n_eq - 1], bounds[2 * n_eq], vh, vm,
                       fixed_h, fixed_m, sizes, pair_off, proj_data,
                       H, full, all_mask, sh2, sm2)
            if sh1[0] != sh2[0] or sm1[0] != sm2[0]:
                found = 1
                found_trial = trial
                witness = [(vh[i], int(vm[i])) for i in range(nv)]
                break
        if found:
            return True, found_trial, witness, int(premise_hits)
        return False, trials, None, int(premise_hits)
    finally:
        free(vh); free(vm); free(gh); free(sh1); free(sm1); free(sh2); free(sm2)


cdef inline int _eval_latt(signed char[:] ops, int[:] args, int start, int end,
                           int *a, int[:] meet, int[:] join, int n, int *stack) nogil:
    cdef int sp = -1
    cdef int i, op, y
    for i in range(start, end):
        op = ops[i]
        if op == OP_LOADV:
            sp += 1
            stack[sp] = a[args[i]]
        elif op == OP_CONST:
            sp += 1
            stack[sp] = args[i]
        elif op == OP_MEET:
            y = stack[sp]
            sp -= 1
            stack[sp] = meet[stack[sp] * n + y]
        else:
            y = stack[sp]
            sp -= 1
            stack[sp] = join[stack[sp] * n + y]
    return stack[0]


def lattice_violation(int n, int[:] meet, int[:] join,
                      signed char[:] ops, int[:] args, int[:] bounds,
                      int n_eq, int nv):
    """Mirror of _kernels_py.lattice_violation."""
    cdef int max_len = 0
    cdef int e
    for e in range(2 * n_eq):
        if bounds[e + 1] - bounds[e] > max_len:
            max_len = bounds[e + 1] - bounds[e]
    cdef int *a = <int *>malloc(sizeof(int) * (nv if nv > 0 else 1))
    cdef int *stack = <int *>malloc(sizeof(int) * (max_len if max_len > 0 else 1))
    if a == NULL or stack == NULL:
        free(a); free(stack)
        raise MemoryError()

    cdef unsigned long long total = 1
    cdef int i
    for i in range(nv):
        total *= <unsigned long long>n

    cdef unsigned long long code, c
    cdef int ok, l, r
    try:
        for code in range(total):
            c = code
            for i in range(nv):
                a[i] = <int>(c % <unsigned long long>n)
                c //= <unsigned long long>n
            ok = 1
            for e in range(n_eq - 1):
                l = _eval_latt(ops, args, bounds[2 * e], bounds[2 * e + 1], a, meet, join, n, stack)
                r = _eval_latt(ops, args, bounds[2 * e + 1], bounds[2 * e + 2], a, meet, join, n, stack)
                if l != r:
                    ok = 0
                    break
            if not ok:
                continue
            l = _eval_latt(ops, args, bounds[2 * n_eq - 2], bounds[2 * n_eq - 1], a, meet, join, n, stack)
            r = _eval_latt(ops, args, bounds[2 * n_eq - 1], bounds[2 * n_eq], a, meet, join, n, stack)
            if l != r:
                return tuple(a[i] for i in range(nv))
        return None
    finally:
        free(a)
        free(stack)
