#include <stdio.h>
#include <stdlib.h>

struct node {
    struct node *c[26];
    int terminal;
};

struct node *alloc_node(void) {
    struct node *n = (struct node *)calloc(1, sizeof(struct node));
    return n;
}

void insert(struct node *root, const char *w) {
    struct node *cur = root;
    for (int i = 0; w[i] != 0; i++) {
        int k = w[i] - 'a';
        if (cur->c[k] == NULL) cur->c[k] = alloc_node();
        cur = cur->c[k];
    }
    cur->terminal = 1;
}

int count_words(struct node *n) {
    if (n == NULL)
        return 0;
    int total = n->terminal;
    for (int k = 0; k < 26; k++)
        total += count_words(n->c[k]);
    return total;
}

int longest(struct node *n) {
    int best = 0;
    for (int k = 0; k < 26; k++) {
        if (n->c[k] != NULL) {
            int d = 1 + longest(n->c[k]);
            if (d > best)
                best = d;
        }
    }
    return best;
}

int main(void) {
    struct node *root = alloc_node();
    insert(root, "car");
    insert(root, "cart");
    insert(root, "dog");
    printf("%d %d\n", count_words(root), longest(root));
    return 0;
}
