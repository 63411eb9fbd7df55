#include <stdio.h>

#define N 8

int tree[2 * N];

void build(int arr[], int n) {
    for (int i = 0; i < n; i++)
        tree[n + i] = arr[i];
    for (int i = n - 1; i > 0; --i)
        tree[i] = tree[2 * i] + tree[2 * i + 1];
}

void update(int pos, int value, int n) {
    int p = pos + n;
    tree[p] = value;
    while (p > 1) {
        p = p / 2;
        tree[p] = tree[2 * p] + tree[2 * p + 1];
    }
}

int query(int l, int r, int n) {
    int res = 0;
    l += n;
    r += n;
    while (l < r) {
        if (l % 2 == 1) {
            res += tree[l];
            l++;
        }
        if (r % 2 == 1) {
            r--;
            res += tree[r];
        }
        l /= 2;
        r /= 2;
    }
    return res;
}

int main(void) {
    int a[N] = {1, 2, 3, 4, 5, 6, 7, 8};
    build(a, N);
    printf("%d\n", query(1, 5, N));
    update(2, 10, N);
    printf("%d\n", query(1, 5, N));
    return 0;
}
