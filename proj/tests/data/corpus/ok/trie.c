#include <stdio.h>
#include <stdlib.h>

#define ALPHA 26

struct trie {
    struct trie *child[ALPHA];
    int end;
};

struct trie *trie_new(void) {
    struct trie *t = (struct trie *)malloc(sizeof(struct trie));
    t->end = 0;
    for (int i = 0; i < ALPHA; i++)
        t->child[i] = NULL;
    return t;
}

void trie_insert(struct trie *root, const char *word) {
    struct trie *cur = root;
    for (int i = 0; word[i] != '\0'; i++) {
        int idx = word[i] - 'a';
        if (cur->child[idx] == NULL)
            cur->child[idx] = trie_new();
        cur = cur->child[idx];
    }
    cur->end = 1;
}

int trie_search(struct trie *root, const char *word) {
    struct trie *cur = root;
    for (int i = 0; word[i] != '\0'; i++) {
        int idx = word[i] - 'a';
        if (cur->child[idx] == NULL)
            return 0;
        cur = cur->child[idx];
    }
    return cur->end;
}

int main(void) {
    struct trie *root = trie_new();
    trie_insert(root, "tree");
    trie_insert(root, "trie");
    trie_insert(root, "heap");
    printf("%d %d\n", trie_search(root, "trie"), trie_search(root, "tr"));
    return 0;
}
