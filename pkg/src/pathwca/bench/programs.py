"""Benchmark programs written with the structured builder.

Each function takes scale parameters and returns a validated-shape Program.
``annotate`` controls AlwaysSat markers; by default they are only placed
when the value domain is wide enough for them to be sound (pure comparison
constraints over ``n`` variables fit in any domain with ``n`` values).
"""
from __future__ import annotations

from ..program import Break, Builder, Call, Cost, If, Set, While, and_, eq, ne
from ..program.model import Program


def _wide(lo, hi, n):
    return hi - lo + 1 >= n


def insertion_sort(N: int = 16, lo: int = 1, hi: int | None = None, annotate: bool | None = None) -> Program:
    hi = N if hi is None else hi
    ann = _wide(lo, hi, N) if annotate is None else annotate
    b = Builder("InsertionSort", scale={"N": N})
    A = b.input_array("A", N, lo, hi)
    i, j, key = b.local("i", "j", "key")
    b.main(
        Set(i, 1),
        While(i < N, [
            Set(key, A[i]),
            Set(j, i - 1),
            While(and_(j >= 0, A[j] > key), [
                Set(A[j + 1], A[j]),
                Cost(1),
                Set(j, j - 1),
            ], always_sat=ann),
            Set(A[j + 1], key),
            Set(i, i + 1),
        ]),
    )
    return b.build()


def insertion_sort_jumps(N: int = 16, lo: int = 1, hi: int | None = None, annotate: bool | None = None) -> Program:
    """Insertion sort charging one unit per evaluated branch guard."""
    hi = N if hi is None else hi
    ann = _wide(lo, hi, N) if annotate is None else annotate
    b = Builder("InsertionSortJumps", scale={"N": N})
    A = b.input_array("A", N, lo, hi)
    i, j, key, go = b.local("i", "j", "key", "go")
    b.main(
        Set(i, 1),
        Cost(1),
        While(i < N, [
            Set(key, A[i]),
            Set(j, i - 1),
            Set(go, 1),
            While(eq(go, 1), [
                Cost(1),
                If(j >= 0, [
                    Cost(1),
                    If(A[j] > key, [
                        Set(A[j + 1], A[j]),
                        Set(j, j - 1),
                    ], [Set(go, 0)], always_sat=ann),
                ], [Set(go, 0)]),
            ]),
            Set(A[j + 1], key),
            Set(i, i + 1),
            Cost(1),
        ]),
    )
    return b.build()


def quicksort(N: int = 16, lo: int = 1, hi: int | None = None, annotate: bool | None = None) -> Program:
    """First-element pivot, three-way partition, ``N`` cost units per call with N >= 2.

    Recursion is replaced by an explicit stack of (start, length) segments;
    the left part is processed before the right one, as in the recursive form.
    """
    hi = N if hi is None else hi
    ann = _wide(lo, hi, N) if annotate is None else annotate
    b = Builder("QuickSort", scale={"N": N})
    A = b.input_array("A", N, lo, hi)
    cap = 2 * N + 2
    SS, SL = b.local_array("SS", cap), b.local_array("SL", cap)
    TL, TM, TR = b.local_array("TL", N), b.local_array("TM", N), b.local_array("TR", N)
    sp, s, n, pivot, i, x, nl, nm, nr, j = b.local("sp", "s", "n", "pivot", "i", "x", "nl", "nm", "nr", "j")

    def copy_back(buf, count, offset):
        return [
            Set(j, 0),
            While(j < count, [Set(A[offset + j], buf[j]), Set(j, j + 1)]),
        ]

    b.main(
        Set(SS[0], 0), Set(SL[0], N), Set(sp, 1),
        While(sp > 0, [
            Set(sp, sp - 1), Set(s, SS[sp]), Set(n, SL[sp]),
            If(n > 1, [
                Cost(n),
                Set(pivot, A[s]),
                Set(TM[0], A[s]),
                Set(nl, 0), Set(nm, 1), Set(nr, 0),
                Set(i, 1),
                While(i < n, [
                    Set(x, A[s + i]),
                    If(x < pivot, [
                        Set(TL[nl], x), Set(nl, nl + 1),
                    ], [
                        If(eq(x, pivot), [
                            Set(TM[nm], x), Set(nm, nm + 1),
                        ], [
                            Set(TR[nr], x), Set(nr, nr + 1),
                        ], always_sat=ann),
                    ], always_sat=ann),
                    Set(i, i + 1),
                ]),
                *copy_back(TL, nl, s),
                *copy_back(TM, nm, s + nl),
                *copy_back(TR, nr, s + nl + nm),
                Set(SS[sp], s + nl + nm), Set(SL[sp], nr), Set(sp, sp + 1),
                Set(SS[sp], s), Set(SL[sp], nl), Set(sp, sp + 1),
            ]),
        ]),
    )
    return b.build()


def heap_insertion(N: int = 16, lo: int = 0, hi: int = 255, annotate: bool | None = None) -> Program:
    """Insert A[0..N-1] into a binary min-heap; one cost unit per sift-up swap."""
    ann = _wide(lo, hi, N) if annotate is None else annotate
    b = Builder("HeapInsertion", scale={"N": N})
    A = b.input_array("A", N, lo, hi)
    H = b.local_array("H", N)
    k, c, p, t = b.local("k", "c", "p", "t")
    b.main(
        Set(k, 0),
        While(k < N, [
            Set(H[k], A[k]),
            Set(c, k),
            While(c > 0, [
                Set(p, (c - 1) // 2),
                If(H[c] < H[p], [
                    Set(t, H[c]), Set(H[c], H[p]), Set(H[p], t),
                    Cost(1),
                    Set(c, p),
                ], [Break()], always_sat=ann),
            ]),
            Set(k, k + 1),
        ]),
    )
    return b.build()


def bst_insertion(N: int = 16, lo: int = 0, hi: int = 255, annotate: bool | None = None) -> Program:
    """Insert A[0..N-1] into an unbalanced BST; one cost unit per visited node."""
    ann = _wide(lo, hi, N) if annotate is None else annotate
    b = Builder("BSTInsertion", scale={"N": N})
    A = b.input_array("A", N, lo, hi)
    KEY, LEFT, RIGHT = b.local_array("KEY", N), b.local_array("LEFT", N), b.local_array("RIGHT", N)
    k, cur, m = b.local("k", "cur", "m")
    b.main(
        Set(m, 0),
        While(m < N, [Set(LEFT[m], -1), Set(RIGHT[m], -1), Set(m, m + 1)]),
        Set(KEY[0], A[0]),
        Set(k, 1),
        While(k < N, [
            Set(KEY[k], A[k]),
            Set(cur, 0),
            While(True, [
                Cost(1),
                If(A[k] < KEY[cur], [
                    If(eq(LEFT[cur], -1), [Set(LEFT[cur], k), Break()], [Set(cur, LEFT[cur])]),
                ], [
                    If(eq(RIGHT[cur], -1), [Set(RIGHT[cur], k), Break()], [Set(cur, RIGHT[cur])]),
                ], always_sat=ann),
            ]),
            Set(k, k + 1),
        ]),
    )
    return b.build()


def dijkstra(N: int = 8, lo: int = 1, hi: int | None = None) -> Program:
    """Dense Dijkstra from vertex 0 over weights W[u*N+v]; cost = successful relaxations.

    Reached/visited flags are concrete, so "infinite" distances never enter
    a symbolic comparison.
    """
    hi = 2 * N if hi is None else hi
    b = Builder("Dijkstra", scale={"N": N})
    W = b.input_array("W", N * N, lo, hi)
    dist, reached, visited = b.local_array("dist", N), b.local_array("reached", N), b.local_array("visited", N)
    r, u, v, nd = b.local("r", "u", "v", "nd")
    b.main(
        Set(dist[0], 0), Set(reached[0], 1),
        Set(r, 0),
        While(r < N, [
            Set(u, -1),
            Set(v, 0),
            While(v < N, [
                If(and_(eq(visited[v], 0), eq(reached[v], 1)), [
                    If(eq(u, -1), [Set(u, v)], [
                        If(dist[v] < dist[u], [Set(u, v)]),
                    ]),
                ]),
                Set(v, v + 1),
            ]),
            If(eq(u, -1), [Break()]),
            Set(visited[u], 1),
            Set(v, 0),
            While(v < N, [
                If(and_(eq(visited[v], 0), ne(v, u)), [
                    Set(nd, dist[u] + W[u * N + v]),
                    If(eq(reached[v], 0), [
                        Set(dist[v], nd), Set(reached[v], 1), Cost(1),
                    ], [
                        If(nd < dist[v], [Set(dist[v], nd), Cost(1)]),
                    ]),
                ]),
                Set(v, v + 1),
            ]),
            Set(r, r + 1),
        ]),
    )
    return b.build()


def bellman_ford(N: int = 8, lo: int = 1, hi: int | None = None) -> Program:
    """N-1 rounds over all ordered pairs; cost = successful relaxations."""
    hi = 2 * N if hi is None else hi
    b = Builder("BellmanFord", scale={"N": N})
    W = b.input_array("W", N * N, lo, hi)
    dist, reached = b.local_array("dist", N), b.local_array("reached", N)
    it, u, v, nd = b.local("it", "u", "v", "nd")
    b.main(
        Set(dist[0], 0), Set(reached[0], 1),
        Set(it, 1),
        While(it < N, [
            Set(u, 0),
            While(u < N, [
                If(eq(reached[u], 1), [
                    Set(v, 0),
                    While(v < N, [
                        If(ne(u, v), [
                            Set(nd, dist[u] + W[u * N + v]),
                            If(eq(reached[v], 0), [
                                Set(dist[v], nd), Set(reached[v], 1), Cost(1),
                            ], [
                                If(nd < dist[v], [Set(dist[v], nd), Cost(1)]),
                            ]),
                        ]),
                        Set(v, v + 1),
                    ]),
                ]),
                Set(u, u + 1),
            ]),
            Set(it, it + 1),
        ]),
    )
    return b.build()


def bellman_ford_queue(N: int = 8, lo: int = 1, hi: int | None = None) -> Program:
    """Queue-based Bellman-Ford (SPFA) from vertex 0; cost = successful relaxations."""
    hi = 2 * N if hi is None else hi
    b = Builder("BellmanFordQueue", scale={"N": N})
    W = b.input_array("W", N * N, lo, hi)
    dist, reached, inq, Q = (b.local_array("dist", N), b.local_array("reached", N),
                             b.local_array("inq", N), b.local_array("Q", N))
    head, size, u, v, nd, relaxed = b.local("head", "size", "u", "v", "nd", "relaxed")
    push_v = [
        If(eq(inq[v], 0), [
            Set(Q[(head + size) % N], v), Set(size, size + 1), Set(inq[v], 1),
        ]),
    ]
    b.main(
        Set(dist[0], 0), Set(reached[0], 1),
        Set(Q[0], 0), Set(inq[0], 1), Set(head, 0), Set(size, 1),
        While(size > 0, [
            Set(u, Q[head]), Set(head, (head + 1) % N), Set(size, size - 1), Set(inq[u], 0),
            Set(v, 0),
            While(v < N, [
                If(ne(u, v), [
                    Set(nd, dist[u] + W[u * N + v]),
                    Set(relaxed, 0),
                    If(eq(reached[v], 0), [
                        Set(dist[v], nd), Set(reached[v], 1), Cost(1), Set(relaxed, 1),
                    ], [
                        If(nd < dist[v], [Set(dist[v], nd), Cost(1), Set(relaxed, 1)]),
                    ]),
                    If(eq(relaxed, 1), push_v),
                ]),
                Set(v, v + 1),
            ]),
        ]),
    )
    return b.build()


def hash_table(N: int = 8, P: int = 13, lo: int = 0, hi: int = 103) -> Program:
    """Chained hash table, bucket = key mod P; cost = key comparisons along chains.

    The bucket number is found by testing ``key % P == b`` for b = 0, 1, ...
    so it is concrete afterwards and can index the table.
    """
    b = Builder("HashTable", scale={"N": N, "P": P})
    K = b.input_array("K", N, lo, hi)
    CHAIN = b.local_array("CHAIN", P * N)
    LEN = b.local_array("LEN", P)
    k, h, t, dup = b.local("k", "h", "t", "dup")
    b.main(
        Set(k, 0),
        While(k < N, [
            Set(h, 0),
            While(h < P - 1, [
                If(eq(K[k] % P, h), [Break()]),
                Set(h, h + 1),
            ]),
            Set(dup, 0),
            Set(t, 0),
            While(t < LEN[h], [
                Cost(1),
                If(eq(CHAIN[h * N + t], K[k]), [Set(dup, 1), Break()]),
                Set(t, t + 1),
            ]),
            If(eq(dup, 0), [
                Set(CHAIN[h * N + LEN[h]], K[k]),
                Set(LEN[h], LEN[h] + 1),
            ]),
            Set(k, k + 1),
        ]),
    )
    return b.build()


def is_palindrome(N: int = 20, lo: int = 0, hi: int = 255) -> Program:
    """Full-length scan comparing S[i] with S[N-1-i]; one unit per iteration."""
    b = Builder("IsPalindrome", scale={"N": N})
    S = b.input_array("S", N, lo, hi)
    i = b.local("i")
    b.main(
        Set(i, 0),
        While(i < N, [
            Cost(1),
            If(ne(S[i], S[N - 1 - i]), [Break()]),
            Set(i, i + 1),
        ]),
    )
    return b.build()


def is_palindrome_half(N: int = 20, lo: int = 0, hi: int = 255, annotate: bool | None = None) -> Program:
    """Scan only the first half; one unit per iteration."""
    ann = _wide(lo, hi, 2) if annotate is None else annotate
    b = Builder("IsPalindromeHalf", scale={"N": N})
    S = b.input_array("S", N, lo, hi)
    i = b.local("i")
    b.main(
        Set(i, 0),
        While(i < N // 2, [
            Cost(1),
            If(ne(S[i], S[N - 1 - i]), [Break()], always_sat=ann),
            Set(i, i + 1),
        ]),
    )
    return b.build()


def memory_fill(N: int = 20, lo: int = 0, hi: int = 255, annotate: bool | None = None) -> Program:
    """Copy the non-zero elements of S into D; one unit per copied element."""
    ann = (lo <= 0 < hi or lo < 0 <= hi) if annotate is None else annotate
    b = Builder("MemoryFill", scale={"N": N})
    S = b.input_array("S", N, lo, hi)
    D = b.local_array("D", N)
    i, j = b.local("i", "j")
    b.main(
        Set(i, 0), Set(j, 0),
        While(i < N, [
            If(ne(S[i], 0), [Set(D[j], S[i]), Set(j, j + 1), Cost(1)], always_sat=ann),
            Set(i, i + 1),
        ]),
    )
    return b.build()


def alternate0(N: int = 20, lo: int = 0, hi: int = 255, annotate: bool | None = None) -> Program:
    """Six units whenever zero-ness flips between neighbours, one unit otherwise.

    The flag starts as "previous element was non-zero", so the maximum 6N
    is reached by 0, x, 0, x, ... with x != 0.
    """
    ann = (lo <= 0 < hi or lo < 0 <= hi) if annotate is None else annotate
    b = Builder("Alternate0", scale={"N": N})
    S = b.input_array("S", N, lo, hi)
    i, z, prev = b.local("i", "z", "prev")
    b.main(
        Set(i, 0), Set(prev, 0),
        While(i < N, [
            If(eq(S[i], 0), [Set(z, 1)], [Set(z, 0)], always_sat=ann),
            If(ne(z, prev), [Cost(6)], [Cost(1)]),
            Set(prev, z),
            Set(i, i + 1),
        ]),
    )
    return b.build()


def _edge_index(N, u, v):
    # position of the unordered pair (u, v), u < v, in the upper-triangle list
    return u * N - (u * (u + 1)) // 2 + v - u - 1


def dfs(N: int = 10) -> Program:
    """Recursive depth-first search from vertex 0 on an undirected graph.

    E holds the upper triangle of the adjacency matrix. Each visited vertex
    scans all N candidates, one cost unit per candidate; the edge is tested
    before the visited flag.
    """
    b = Builder("DFS", scale={"N": N})
    E = b.input_array("E", N * (N - 1) // 2, 0, 1)
    visited, IT, UST = b.local_array("visited", N), b.local_array("IT", N + 1), b.local_array("UST", N + 1)
    u, v, d, e = b.local("u", "v", "d", "e")
    load_edge = [
        If(u < v, [Set(e, E[_edge_index(N, u, v)])], [
            If(v < u, [Set(e, E[_edge_index(N, v, u)])], [Set(e, 0)]),
        ]),
    ]
    b.sub("visit",
          Set(IT[d], 0),
          While(IT[d] < N, [
              Set(v, IT[d]),
              Cost(1),
              *load_edge,
              If(eq(e, 1), [
                  If(eq(visited[v], 0), [
                      Set(visited[v], 1),
                      Set(UST[d], u), Set(d, d + 1), Set(u, v),
                      Call("visit"),
                      Set(d, d - 1), Set(u, UST[d]),
                  ]),
              ]),
              Set(IT[d], IT[d] + 1),
          ]))
    b.main(
        Set(visited[0], 1), Set(u, 0), Set(d, 0),
        Call("visit"),
    )
    return b.build()


def bfs(N: int = 10) -> Program:
    """Breadth-first search from vertex 0; one cost unit per scanned candidate."""
    b = Builder("BFS", scale={"N": N})
    E = b.input_array("E", N * (N - 1) // 2, 0, 1)
    visited, Q = b.local_array("visited", N), b.local_array("Q", N)
    head, tail, u, v, e = b.local("head", "tail", "u", "v", "e")
    b.main(
        Set(visited[0], 1), Set(Q[0], 0), Set(head, 0), Set(tail, 1),
        While(head < tail, [
            Set(u, Q[head]), Set(head, head + 1),
            Set(v, 0),
            While(v < N, [
                Cost(1),
                If(u < v, [Set(e, E[_edge_index(N, u, v)])], [
                    If(v < u, [Set(e, E[_edge_index(N, v, u)])], [Set(e, 0)]),
                ]),
                If(eq(e, 1), [
                    If(eq(visited[v], 0), [
                        Set(visited[v], 1), Set(Q[tail], v), Set(tail, tail + 1),
                    ]),
                ]),
                Set(v, v + 1),
            ]),
        ]),
    )
    return b.build()


def unsat_example(lo: int = -5, hi: int = 5) -> Program:
    """Two nested tests whose both-true path is infeasible (x > 0 and x < 0)."""
    b = Builder("UnsatExample")
    X = b.input_scalar("X", lo, hi)
    b.main(
        If(X > 0, [
            Cost(1),
            If(X < 0, [Cost(10)], [Cost(2)]),
        ]),
    )
    return b.build()
